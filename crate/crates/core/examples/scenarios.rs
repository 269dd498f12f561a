//! Replay the shipped verification scenarios and print their reports.
//! With no argument every scenario runs; otherwise only the named ones.
//!
//! cargo run --release --example scenarios -- prop31-b10 may-collapse

use cobar_engine::scenarios::{list_scenarios, run_scenario, RunOpts, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = list_scenarios().into_iter().map(|(n, _)| n).collect();
    }
    let opts = RunOpts { timing: true, ..Default::default() };
    let mut passed = 0;
    for name in &names {
        let rep = run_scenario(name, &opts)?;
        print!("{}", rep.text());
        println!();
        passed += usize::from(rep.verdict == Verdict::Pass);
    }
    println!("{passed} of {} passed", names.len());
    Ok(())
}

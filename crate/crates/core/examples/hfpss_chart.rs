//! Run the homotopy fixed point spectral sequence of a truncated comodule
//! and print its pages and the final chart, one record per bidegree:
//! `c <column> <degree> <dim> <reps…>`.
//!
//! cargo run --release --example hfpss_chart -- [preset] [columns] [max-degree]

use cobar_engine::presets::{BuildOpts, Library};
use cobar_engine::ss_engine::PageSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "hk".into());
    let columns: u32 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(2);
    let max: i64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(50);

    let cap = max + 2 * (columns as i64 - 1);
    let c = Library::builtin().comodule(&preset, &BuildOpts::p(5).columns(columns).cap(cap))?;
    let spec = PageSpec::hfpss(&c.comod, c.column, max)?;
    let pages = spec.run()?;
    for pg in &pages {
        let total: u64 = pg.dims().values().sum();
        println!("E_{}: {total} classes in degrees {}..{}", pg.r, pg.min, pg.max);
    }
    let last = pages.last().expect("at least one page");
    for line in last.chart_lines(c.alg()) {
        println!("{line}");
    }
    // classes by total degree, the shape a Poincaré comparison works with
    let by_degree = last.total_dims();
    println!("total dimension by degree: {by_degree:?}");
    Ok(())
}

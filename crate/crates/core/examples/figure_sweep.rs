//! Runs a built-in figure preset and writes the renderer's CSV.
//!
//! ```text
//! cargo run --release --example figure_sweep -- fig3 fig3.csv
//! ```

use std::fs::File;
use std::io::{BufWriter, Write};

use fibrelink::experiments::sweep::write_sweep_csv;
use fibrelink::experiments::{preset, presets, run_sweep};

fn main() -> fibrelink::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig2".to_string());
    let out = args.next().unwrap_or_else(|| format!("{name}.csv"));
    let Some(preset) = preset(&name) else {
        eprintln!("unknown preset {name:?}; available:");
        for p in presets() {
            eprintln!("  {:<5} {}", p.name, p.description);
        }
        std::process::exit(1);
    };

    print!("{}", preset.spec.to_config_text());
    let points = preset.spec.points().len();
    let rows = run_sweep(&preset.spec)?;
    let mut w = BufWriter::new(File::create(&out)?);
    write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    println!("{points} parameter points, {} rows -> {out}", rows.len());
    Ok(())
}

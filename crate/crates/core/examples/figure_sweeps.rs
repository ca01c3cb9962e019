//! The three figure grids as CSV, written to a directory (default: a fresh
//! temporary one).

use chanskew::sweep::{fig1, fig2, fig3, SweepSpec};

fn main() -> chanskew::Result<()> {
    let dir = std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(|| {
        let d = std::env::temp_dir().join("chanskew-figures");
        std::fs::create_dir_all(&d).expect("temp dir");
        d
    });
    let eps = SweepSpec::log_spaced(1e-10, 1e-1, 10)?;
    let tables = [
        ("fig1.csv", fig1(&SweepSpec::new(vec![100, 250, 500], eps)?, 0.11)?),
        ("fig2.csv", fig2(&SweepSpec::new(vec![400], SweepSpec::log_spaced(1e-5, 1e-3, 9)?)?, 10.0)?),
        ("fig3.csv", fig3(&SweepSpec::new(vec![100, 250, 500], SweepSpec::log_spaced(1e-6, 1e-1, 6)?)?, 0.6, 0.2)?),
    ];
    for (name, t) in tables {
        let path = dir.join(name);
        std::fs::write(&path, t.to_csv()).expect("write csv");
        println!("{} rows -> {}", t.rows.len(), path.display());
    }
    Ok(())
}

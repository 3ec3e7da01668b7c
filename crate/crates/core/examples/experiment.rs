//! A small sweep written as JSON, CSV and SVG.

use capcover::metrics::{emit, parse_formats, run_experiment, Grid};

fn main() -> capcover::Result<()> {
    let grid = Grid::from_json(
        r#"{
            "bodies": [{"id": "disk", "body": {"type": "ball", "dim": 2}}],
            "eps": [0.1, 0.05, 0.02, 0.01],
            "methods": ["layered", "dudley", "bi"],
            "seeds": [0]
        }"#,
    )?;
    let exp = run_experiment(&grid);
    let out = std::env::temp_dir().join("capcover-experiment");
    for path in emit(&exp, &parse_formats("json,csv,svg")?, &out)? {
        println!("wrote {}", path.display());
    }
    for f in &exp.fits {
        println!("{}: slope {:.3} (R² {:.3})", f.method.name(), f.slope, f.r2);
    }
    Ok(())
}

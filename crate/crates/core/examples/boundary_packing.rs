//! Disjoint Macbeath regions at depth ε and their volume classes.

use capcover::bodies::Body;
use capcover::caps::boundary_packing;

fn main() -> capcover::Result<()> {
    for (name, k) in [("disk", Body::ball(2, 1.0)?), ("square", Body::cube(2)?)] {
        for eps in [0.05, 0.01] {
            let p = boundary_packing(&k, eps, 0, 4096)?;
            println!("{name} ε={eps}: {} regions, ray coverage {:.3}", p.entries.len(), p.coverage);
            for (j, n) in &p.histogram {
                println!("    class {j:>3}: {}", "#".repeat((*n).min(60)));
            }
        }
    }
    Ok(())
}

//! Dudley and Bronshteyn–Ivanov next to the layered construction.

use capcover::bodies::Body;
use capcover::metrics::{run_cell, Method};

fn main() {
    let k = Body::ball(2, 1.0).expect("valid body");
    println!("{:>6} {:>8} {:>8} {:>8}", "ε", "layered", "dudley", "bi");
    for eps in [0.1, 0.03, 0.01, 0.003] {
        let row: Vec<String> = [Method::Layered, Method::Dudley, Method::Bi]
            .into_iter()
            .map(|m| run_cell("disk", &k, eps, m, 0).counts.total.to_string())
            .collect();
        println!("{eps:>6} {:>8} {:>8} {:>8}", row[0], row[1], row[2]);
    }
}

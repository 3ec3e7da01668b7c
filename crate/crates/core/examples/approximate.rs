//! Layered inner approximation and its witness-collector report.

use capcover::bodies::Body;
use capcover::construction::{approximate, verify_witness_collector, ApproxConfig};

fn main() -> capcover::Result<()> {
    let k = Body::ellipsoid(&[2.0, 1.0])?;
    for eps in [0.1, 0.05, 0.02, 0.01] {
        let r = approximate(&k, eps, &ApproxConfig::default())?;
        println!(
            "ε={eps:<5} {:>4} vertices, hausdorff {:.4}, c₀ = {}, {} layers, {} ms",
            r.record.counts.vertices,
            r.hausdorff_est,
            r.record.constants.c0,
            r.stats.per_layer.len(),
            r.record.runtime_ms
        );
        let rep = verify_witness_collector(&r.system, &r.canonical_points, r.stats.canonical_eps, 500, 0);
        println!(
            "         witness-collector: passed {}, max points per collector {}",
            rep.passed(),
            rep.max_points_per_collector
        );
    }
    Ok(())
}

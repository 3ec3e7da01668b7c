//! Body oracles, the John ellipsoid and the canonical form.

use capcover::bodies::{john_ellipsoid, to_canonical, Body, BodySpec};
use capcover::geom::Point;

fn main() -> capcover::Result<()> {
    let spec = BodySpec::from_json(r#"{"type": "ellipsoid", "dim": 3, "axes": [2.0, 1.0, 0.5]}"#)?;
    let bodies = [
        ("ellipsoid", spec.build()?),
        ("cube", Body::cube(3)?),
        ("ℓ_4 ball", Body::lp_ball(3, 4.0, 1.0)?),
        ("random polytope", Body::random_polytope(3, 30, 1)?),
    ];
    for (name, k) in &bodies {
        let e = john_ellipsoid(k)?;
        let c = to_canonical(k)?;
        let x = Point::new(&[0.3, 0.1, 0.0]);
        println!(
            "{name:>16}: John axes {:.3?}, γ = {:.3}, δ(x) = {:.4}, ray(x) = {:.4}",
            e.semi_axes(),
            c.gamma,
            k.delta(&x)?,
            k.ray_distance(&x)?
        );
    }
    Ok(())
}

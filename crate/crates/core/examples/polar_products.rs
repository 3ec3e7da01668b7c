//! Polar bodies, Mahler volumes and cap/polar-cap products.

use capcover::bodies::{to_canonical, Body};
use capcover::caps::CapBody;
use capcover::geom::{box_polytope, standard_simplex, Point};
use capcover::polar::{cap_product_sweep, dual_cap_polar, mahler, polar_body, polar_capbody, DEFAULT_C};
use capcover::sampling::sphere_directions;

fn main() -> capcover::Result<()> {
    let square = box_polytope(&[1.0, 1.0])?;
    let pair = polar_body(&square, &Point::zeros(2))?;
    println!(
        "polar of the square: {} vertices, involution error {:.1e}",
        pair.polar.vertices().len(),
        pair.involution_error()?
    );
    println!("Mahler volume: square {:.4}, triangle {:.4}", mahler(&square)?, mahler(&standard_simplex(2))?);

    let k = to_canonical(&Body::random_polytope(2, 30, 7)?)?;
    for eps in [0.01, 0.0025] {
        let kc = CapBody::new(&k.body, eps)?;
        let polar = polar_capbody(&kc)?;
        let products = cap_product_sweep(&kc, &polar, &sphere_directions(2, 64, 0), eps, DEFAULT_C)?;
        let v: Vec<f64> = products.iter().map(|p| p.normalized_product).collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        println!("ε={eps}: vol(C)·vol(π(C))/ε³ in [{lo:.4}, {hi:.4}]");
    }

    let flat = [Point::new(&[-1.0, -0.5, 0.8]), Point::new(&[1.0, -0.4, 1.1]), Point::new(&[0.1, 1.0, 1.0])];
    let x = Point::centroid(&flat);
    let r = dual_cap_polar(&flat, &(x * 1.7), &x)?;
    println!("dual cap: α = {:.4}, vertex error {:.1e}", r.alpha, r.vertex_error);
    Ok(())
}

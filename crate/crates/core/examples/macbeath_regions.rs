//! Caps, expansions, Macbeath regions and minimal caps on the disk.

use capcover::bodies::Body;
use capcover::caps::{expand_cap, macbeath, make_cap, minimal_cap, CapBody, SHRUNKEN};
use capcover::geom::Point;

fn main() -> capcover::Result<()> {
    let k = CapBody::new(&Body::ball(2, 1.0)?, 0.001)?;
    println!("disk proxy: {} vertices, error {:.2e}", k.polytope().vertices().len(), k.proxy_error());

    let u = Point::new(&[0.0, 1.0]);
    let cap = make_cap(&k, &u, 0.1)?;
    let doubled = expand_cap(&cap, 2.0);
    println!(
        "cap width 0.1: volume {:.5}; doubled {:.5} (ratio {:.2})",
        cap.volume(),
        doubled.volume(),
        doubled.volume() / cap.volume()
    );

    let x = Point::new(&[0.0, 0.95]);
    for lambda in [1.0, SHRUNKEN, 0.05] {
        let m = macbeath(&k, &x, lambda)?;
        println!("M^{lambda}(x): volume {:.3e}, radius {:.4}", m.volume, m.radius());
    }

    let c = minimal_cap(&k, &x)?;
    println!("minimal cap at x: normal {:.3?}, width {:.4}, δ(x) = {:.4}", c.normal().coords(), c.width(), k.depth(&x));
    Ok(())
}

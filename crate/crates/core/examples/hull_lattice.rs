//! Convex hull, face lattice and halfspace intersection.

use capcover::geom::{self, Halfspace, Point, Polytope};
use capcover::sampling::{random_in_ball, rng};

fn main() -> capcover::Result<()> {
    let mut r = rng(7);
    let pts: Vec<Point> = (0..40).map(|_| random_in_ball(&mut r, 3)).collect();
    let p = Polytope::hull(&pts)?;
    let profile = geom::face_lattice(&p);
    println!("hull of 40 points in the unit ball: {} vertices", p.vertices().len());
    println!("f-vector {:?}, total {}, Euler {}", profile.f_vector, profile.total, profile.euler_characteristic());
    println!("volume {:.4}, centroid {:?}", p.volume(), p.centroid().coords());

    // The cube as an intersection of six slabs.
    let mut hs = Vec::new();
    for i in 0..3 {
        for s in [1.0, -1.0] {
            hs.push(Halfspace::new(Point::unit(3, i) * s, 1.0)?);
        }
    }
    let cube = geom::halfspace_intersection(&hs, &Point::zeros(3))?;
    println!("cube from halfspaces: f-vector {:?}", geom::face_lattice(&cube).f_vector);

    let shifted = cube.map(&geom::AffineMap::translation_by(Point::new(&[1.5, 0.0, 0.0])));
    let sep = geom::disjoint(&cube, &shifted)?;
    println!("cube vs cube shifted by 1.5 overlap: {}", !sep.disjoint);
    Ok(())
}

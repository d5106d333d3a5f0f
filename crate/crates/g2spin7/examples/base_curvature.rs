//! Flat graph, curved base connection: the verdict hangs on whether the
//! base curvature is anti-self-dual along the graph.

use g2spin7::fm::poly::Poly;
use g2spin7::fm::section::{GraphSection, StructureCase};
use g2spin7::fm::equivalence_sweep;
use g2spin7::scalar::{Exact, Scalar};
use g2spin7::spin7::Spin7Data;

/// Linear potential with constant curvature `sum c dx^i ^ dx^j`.
fn potential(terms: &[(usize, usize, Exact)]) -> Vec<Poly<Exact>> {
    let mut a = vec![Poly::zero(4); 4];
    for (i, j, c) in terms {
        a[*j] = a[*j].add(&Poly::var(4, *i).scale(c));
    }
    a
}

fn main() {
    let sp = Spin7Data::<Exact>::standard();
    let c = Exact::from_ratio(3, 2);
    let flat = |a| {
        GraphSection::constant(StructureCase::Spin7, &vec![Exact::zero(); 4])
            .with_potential(a)
            .unwrap()
    };

    let cases = [
        ("anti-self-dual  dx01 - dx23", potential(&[(0, 1, c.clone()), (2, 3, -c.clone())])),
        ("self-dual       dx01 + dx23", potential(&[(0, 1, c.clone()), (2, 3, c.clone())])),
        ("mixed           dx01 - dx23 + dx02 + dx31", potential(&[
            (0, 1, c.clone()),
            (2, 3, -c.clone()),
            (0, 2, c.clone()),
            (3, 1, c.clone()),
        ])),
    ];
    for (label, a) in cases {
        let sweep = equivalence_sweep(&sp, &flat(a));
        let get = |id: &str| sweep.residuals.iter().find(|r| r.id == id).unwrap();
        println!("{label}:");
        println!("  self-dual part of pulled-back base curvature: {:?}", get("geo.asd-defect").status);
        println!("  residual pair of the total curvature: {:?} / {:?}",
            get("conn.full.r1").status, get("conn.full.r2").status);
        println!("  agreements hold: {}\n", sweep.all_agree());
        assert!(sweep.all_agree());
    }
}

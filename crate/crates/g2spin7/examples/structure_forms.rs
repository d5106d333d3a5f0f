//! A tour of the structure forms and the frame-level oracles.

use g2spin7::g2::G2Data;
use g2spin7::scalar::{Exact, Scalar};
use g2spin7::spin7::Spin7Data;
use g2spin7::Vector;

fn main() {
    let g2 = G2Data::<Exact>::standard();
    let sp = Spin7Data::<Exact>::standard();

    println!("|phi|^2  = {}", g2.phi.norm_sq());
    println!("|Phi|^2  = {}", sp.phi4.norm_sq());
    println!("Phi self-dual: {}", sp.phi4.hodge() == sp.phi4);

    // The model calibrated planes.
    let e7 = |i: usize| Vector::<Exact>::basis(7, i);
    println!(
        "\nassociative plane e_123 residual zero: {}",
        g2.associative_residual(&[e7(0), e7(1), e7(2)]).is_zero()
    );
    let coassoc = g2.coassociative_residual(&[e7(3), e7(4), e7(5), e7(6)]);
    println!(
        "coassociative plane e_4567 residual zero: {}",
        coassoc.iter().all(|c| c.is_zero())
    );

    // Tilting the last leg of a Cayley plane splits the frame volume
    // between the calibration value and the defect form.
    let e = |i: usize| Vector::<Exact>::basis(8, i);
    println!("\ntilted frames (e_0, e_1, e_2, k e_3 + l e_4):");
    println!("  {:>4} {:>4} {:>12} {:>12} {:>12}", "k", "l", "|Phi(v)|^2", "8|tau|^2", "|v0^..^v3|^2");
    for (k, l) in [(1i64, 0i64), (0, 1), (3, 4), (-2, 5)] {
        let last = &e(3).scale(&Exact::from_int(k)) + &e(4).scale(&Exact::from_int(l));
        let (p, t, v) = sp.cayley_defect(&[e(0), e(1), e(2), last]);
        println!(
            "  {:>4} {:>4} {:>12} {:>12} {:>12}",
            k,
            l,
            p.to_string(),
            t.to_string(),
            v.to_string()
        );
    }
}

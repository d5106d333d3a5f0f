//! Splitting forms into irreducible pieces.
//!
//! On R^7 a 2-form splits into a 7- and a 14-dimensional summand; on R^8
//! the grades 2, 4, 6 each contain a distinguished 7-dimensional summand
//! cut out by the injections `lambda^k` of covectors. This example
//! decomposes a few concrete forms and checks the squared norms add up.

use g2spin7::g2::G2Data;
use g2spin7::scalar::{Exact, Scalar};
use g2spin7::spin7::Spin7Data;
use g2spin7::Form;

fn show(label: &str, total: &Exact, part7: &Exact, rest: &Exact) {
    println!("  {label:24} |.|^2 = {total}   7-part {part7}   rest {rest}");
}

fn main() {
    let sp = Spin7Data::<Exact>::standard();
    let g2 = G2Data::<Exact>::standard();

    println!("G2 side, 2-forms on R^7:");
    // A vector contraction of phi lands in the 7-summand...
    let in7 = Form::from_labeled_terms(
        7,
        2,
        &[(&[2, 3][..], Exact::one()), (&[4, 5][..], Exact::one()), (&[6, 7][..], Exact::one())],
    );
    // ...while this combination is orthogonal to every contraction.
    let in14 = Form::from_labeled_terms(
        7,
        2,
        &[(&[2, 3][..], Exact::one()), (&[4, 5][..], -Exact::one())],
    );
    for (label, xi) in [("i(e_1) phi", &in7), ("e^23 - e^45", &in14)] {
        let (p7, p14) = g2.project2(xi);
        show(label, &xi.norm_sq(), &p7.norm_sq(), &p14.norm_sq());
        assert_eq!(xi.norm_sq(), p7.norm_sq() + p14.norm_sq());
    }

    println!("\nSpin(7) side, the lambda images are orthonormal:");
    for k in [2usize, 4, 6] {
        let img = sp.lambda(k, &Form::basis(8, &[1])).unwrap();
        let p7 = sp.project7(k, &img).unwrap();
        let rest = &img - &p7;
        show(&format!("lambda^{k}(e^1)"), &img.norm_sq(), &p7.norm_sq(), &rest.norm_sq());
        // The inverse recovers the covector exactly.
        assert_eq!(sp.lambda_inv(k, &img).unwrap(), Form::basis(7, &[0]));
    }

    println!("\nthe calibration 4-form has no 7-part:");
    let p7 = sp.project7(4, &sp.phi4).unwrap();
    let rest = &sp.phi4 - &p7;
    show("Phi", &sp.phi4.norm_sq(), &p7.norm_sq(), &rest.norm_sq());
    assert!(p7.is_zero());
}

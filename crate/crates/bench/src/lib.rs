//! Fixed inputs shared by the benchmarks.

use l2alpha::{GaussianRational, LaurentMatrix, LaurentPoly};

pub fn counterexample() -> LaurentMatrix {
    LaurentMatrix::scalar(LaurentPoly::from_int_coeffs(0, &[5, -6, 5]))
}

pub fn circle_point() -> GaussianRational {
    GaussianRational::from_fractions((3, 5), (4, 5))
}

/// A dense 3×3 matrix with entries of width 3 and no special structure.
pub fn snf_input() -> LaurentMatrix {
    let p = |v, c: &[i64]| LaurentPoly::from_int_coeffs(v, c);
    LaurentMatrix::from_rows(vec![
        vec![p(0, &[1, -2, 1]), p(-1, &[3, 0, 1]), p(0, &[2, 1])],
        vec![p(0, &[-1, 0, 1]), p(0, &[1, 1, 1]), p(-1, &[1, 0, -2])],
        vec![p(1, &[1, 3]), p(0, &[4, -1]), p(0, &[1, 0, 0, 1])],
    ])
    .expect("static matrix")
}

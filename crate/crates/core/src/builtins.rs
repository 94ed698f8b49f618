//! Named example inputs.

use crate::arith::{GaussianRational, LaurentPoly};
use crate::error::Result;
use crate::groupring::{restrict_to_z, GroupElement, GroupRingMatrix, VcGroupSpec};
use crate::matrix::LaurentMatrix;

pub const BUILTIN_NAMES: [&str; 3] = ["z-1", "counterexample", "dinf-xt"];

/// A built-in input: a group-ring matrix with its group, and its restriction to `Z`.
#[derive(Clone, Debug)]
pub struct BuiltinInput {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: VcGroupSpec,
    pub group_matrix: GroupRingMatrix,
    pub laurent: LaurentMatrix,
}

impl BuiltinInput {
    fn over_z(name: &'static str, description: &'static str, p: LaurentPoly) -> Self {
        let laurent = LaurentMatrix::scalar(p);
        Self {
            name,
            description,
            spec: VcGroupSpec::integers(),
            group_matrix: GroupRingMatrix::from_laurent(&laurent),
            laurent,
        }
    }
}

/// `5z² − 6z + 5`, whose roots `(3 ± 4i)/5` lie on the circle without being roots of unity.
pub fn counterexample_polynomial() -> LaurentPoly {
    LaurentPoly::from_int_coeffs(0, &[5, -6, 5])
}

pub fn builtin(name: &str) -> Result<Option<BuiltinInput>> {
    Ok(Some(match name {
        "z-1" => BuiltinInput::over_z("z-1", "1×1 matrix (z − 1) over Z", LaurentPoly::from_int_coeffs(0, &[-1, 1])),
        "counterexample" => BuiltinInput::over_z("counterexample", "1×1 matrix (5z² − 6z + 5) over Z", counterexample_polynomial()),
        "dinf-xt" => {
            // x + t in the infinite dihedral group, x the translation and t the flip.
            let spec = VcGroupSpec::infinite_dihedral();
            let mut g = GroupRingMatrix::zeros(1, 1)?;
            g.add_term(0, 0, GroupElement::new(1, 0), GaussianRational::from(1));
            g.add_term(0, 0, GroupElement::new(0, 1), GaussianRational::from(1));
            let laurent = restrict_to_z(&g, &spec)?;
            BuiltinInput {
                name: "dinf-xt",
                description: "1×1 matrix (x + t) over the infinite dihedral group",
                spec,
                group_matrix: g,
                laurent,
            }
        }
        _ => return Ok(None),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ns::ns_number_group;

    #[test]
    fn all_names_resolve() {
        for n in BUILTIN_NAMES {
            let b = builtin(n).unwrap().unwrap();
            assert_eq!(b.name, n);
            assert_eq!(restrict_to_z(&b.group_matrix, &b.spec).unwrap(), b.laurent);
        }
        assert!(builtin("nope").unwrap().is_none());
    }

    #[test]
    fn dihedral_example_restriction() {
        let b = builtin("dinf-xt").unwrap().unwrap();
        // g_e·x = x, g_t·x = x⁻¹·g_t, g_e·t = g_t, g_t·t = e.
        let z = LaurentPoly::z();
        let expected = LaurentMatrix::from_rows(vec![
            vec![z.clone(), LaurentPoly::one()],
            vec![LaurentPoly::one(), LaurentPoly::monomial(GaussianRational::from(1), -1)],
        ])
        .unwrap();
        assert_eq!(b.laurent, expected);
        // 1 + x⁻¹t is twice a projection, so the spectrum has a gap at zero.
        assert_eq!(ns_number_group(&b.group_matrix, &b.spec).unwrap(), crate::ns::NsValue::InfinityPlus);
    }
}

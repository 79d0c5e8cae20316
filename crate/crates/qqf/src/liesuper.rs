//! Lie superalgebras as exact structure-constant tables, with validation of
//! the graded axioms, centers, derived ideals, orthogonal complements and
//! derivations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::report::ValidationReport;
use crate::scalar::Scalar;
use crate::superlinalg::{BilinearForm, Endomorphism, Parity, Space, SuperVector};

/// Structure constants are stored only for ordered pairs i <= j; the
/// remaining brackets follow from graded antisymmetry
/// `[b_j, b_i] = -(-1)^{|b_i||b_j|} [b_i, b_j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSuperalgebra {
    name: String,
    space: Space,
    brackets: BTreeMap<(usize, usize), SuperVector>,
}

impl LieSuperalgebra {
    pub fn new(
        name: &str,
        space: &Space,
        entries: Vec<((usize, usize), SuperVector)>,
    ) -> Result<Self> {
        let mut brackets = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= space.dim() || j >= space.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "bracket index ({i}, {j}) out of range"
                )));
            }
            // Normalize to i <= j; out-of-order input is folded in with the
            // antisymmetry sign so duplicates are detected either way.
            let (key, vec) = if i <= j {
                ((i, j), v)
            } else {
                let sign = -space.parity(i).koszul(space.parity(j));
                ((j, i), v.scale(&sign))
            };
            if vec.space() != space {
                return Err(Error::DimensionMismatch(
                    "structure vector lives in the wrong space".into(),
                ));
            }
            if brackets.insert(key, vec).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate bracket entry for ({}, {})",
                    space.label(key.0),
                    space.label(key.1)
                )));
            }
        }
        // [b_i, b_i] = 0 is forced for even b_i.
        for (key, v) in &brackets {
            if key.0 == key.1 && space.parity(key.0) == Parity::Even && !v.is_zero() {
                return Err(Error::Invalid(format!(
                    "[{0}, {0}] must vanish for even {0}",
                    space.label(key.0)
                )));
            }
        }
        Ok(LieSuperalgebra {
            name: name.to_string(),
            space: space.clone(),
            brackets,
        })
    }

    /// Convenience constructor from labelled entries
    /// `(left, right, [(target, coeff), ...])`.
    #[allow(clippy::type_complexity)]
    pub fn from_table(
        name: &str,
        space: &Space,
        table: &[(&str, &str, &[(&str, Scalar)])],
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for (l, r, targets) in table {
            let i = space.index_of(l)?;
            let j = space.index_of(r)?;
            let owned: Vec<(&str, Scalar)> = targets.iter().map(|(t, c)| (*t, c.clone())).collect();
            let v = SuperVector::from_entries(space, &owned)?;
            entries.push(((i, j), v));
        }
        LieSuperalgebra::new(name, space, entries)
    }

    pub fn abelian(name: &str, space: &Space) -> Self {
        LieSuperalgebra::new(name, space, Vec::new()).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Bracket of two basis vectors.
    pub fn bracket_basis(&self, i: usize, j: usize) -> SuperVector {
        if i <= j {
            self.brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| SuperVector::zero(&self.space))
        } else {
            let sign = -self.space.parity(i).koszul(self.space.parity(j));
            self.bracket_basis(j, i).scale(&sign)
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, u: &SuperVector, v: &SuperVector) -> Result<SuperVector> {
        if u.space() != &self.space || v.space() != &self.space {
            return Err(Error::DimensionMismatch(
                "bracket arguments live outside the algebra".into(),
            ));
        }
        let mut acc = SuperVector::zero(&self.space);
        for (i, a) in u.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.coeffs().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc = &acc + &self.bracket_basis(i, j).scale(&(a * b));
            }
        }
        Ok(acc)
    }

    /// `ad_u(v) = [u, v]` for homogeneous u.
    pub fn ad(&self, u: &SuperVector) -> Result<Endomorphism> {
        let parity = u.parity_or(Parity::Even)?;
        Endomorphism::from_action(&self.space, parity, |j| {
            self.bracket(u, &SuperVector::basis(&self.space, j))
                .unwrap()
        })
    }

    /// Checks parity homogeneity of every structure vector and the
    /// super-Jacobi identity on all basis triples. Failures are report
    /// entries, never panics.
    pub fn validate_lie(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (&(i, j), v) in &self.brackets {
            let expected = self.space.parity(i) + self.space.parity(j);
            if !v.has_parity(expected) {
                report.fail(
                    "parity",
                    format!(
                        "[{}, {}] = {} is not homogeneous of parity {}",
                        self.space.label(i),
                        self.space.label(j),
                        v,
                        expected
                    ),
                );
            }
        }
        if !report.is_clean() {
            return report; // parity failures make signs below meaningless
        }
        let n = self.space.dim();
        for i in 0..n {
            let u = SuperVector::basis(&self.space, i);
            for j in 0..n {
                let v = SuperVector::basis(&self.space, j);
                let sign = self.space.parity(i).koszul(self.space.parity(j));
                for k in 0..n {
                    let w = SuperVector::basis(&self.space, k);
                    // [u,[v,w]] = [[u,v],w] + (-1)^{|u||v|} [v,[u,w]]
                    let lhs = self.bracket(&u, &self.bracket(&v, &w).unwrap()).unwrap();
                    let rhs_a = self.bracket(&self.bracket(&u, &v).unwrap(), &w).unwrap();
                    let rhs_b = self.bracket(&v, &self.bracket(&u, &w).unwrap()).unwrap();
                    let rhs = &rhs_a + &rhs_b.scale(&sign);
                    if lhs != rhs {
                        report.fail(
                            "jacobi",
                            format!(
                                "super-Jacobi fails on ({}, {}, {}): lhs = {}, rhs = {}",
                                self.space.label(i),
                                self.space.label(j),
                                self.space.label(k),
                                lhs,
                                rhs
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    /// The center, computed as the kernel of u -> ad_u.
    pub fn center(&self) -> Subspace {
        let n = self.space.dim();
        // Stack the maps u -> [u, b_j] over all j: rows indexed by (j, target).
        let mut m = Mat::zeros(n * n, n);
        for col in 0..n {
            let u = SuperVector::basis(&self.space, col);
            for j in 0..n {
                let b = self
                    .bracket(&u, &SuperVector::basis(&self.space, j))
                    .unwrap();
                for t in 0..n {
                    m.set(j * n + t, col, b.coeff(t).clone());
                }
            }
        }
        Subspace::from_vectors(
            &self.space,
            m.kernel_basis()
                .into_iter()
                .map(|c| SuperVector::from_coeffs(&self.space, c).unwrap())
                .collect(),
        )
    }

    /// The derived ideal [g, g]: span of all structure vectors.
    pub fn derived(&self) -> Subspace {
        let vectors = self.brackets.values().cloned().collect();
        Subspace::from_vectors(&self.space, vectors)
    }

    /// Graded Leibniz rule `f([u,v]) = [f(u),v] + (-1)^{|f||u|}[u,f(v)]`
    /// checked on all basis pairs; returns the first failing pair.
    pub fn derivation_witness(&self, f: &Endomorphism) -> Result<Option<(usize, usize)>> {
        if f.space() != &self.space {
            return Err(Error::DimensionMismatch(
                "endomorphism lives outside the algebra".into(),
            ));
        }
        let n = self.space.dim();
        for i in 0..n {
            let u = SuperVector::basis(&self.space, i);
            let sign = f.parity().koszul(self.space.parity(i));
            for j in 0..n {
                let v = SuperVector::basis(&self.space, j);
                let lhs = f.apply(&self.bracket(&u, &v)?)?;
                let rhs = &self.bracket(&f.apply(&u)?, &v)?
                    + &self.bracket(&u, &f.apply(&v)?)?.scale(&sign);
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_derivation(&self, f: &Endomorphism) -> Result<bool> {
        Ok(self.derivation_witness(f)?.is_none())
    }

    /// Iterates over the stored (ordered) structure constants.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &SuperVector)> {
        self.brackets.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.values().all(SuperVector::is_zero)
    }
}

/// A subspace kept in reduced echelon form with deterministic pivoting, so
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    space: Space,
    /// rows of the reduced echelon basis
    basis: Vec<SuperVector>,
}

impl Subspace {
    pub fn from_vectors(space: &Space, vectors: Vec<SuperVector>) -> Subspace {
        let n = space.dim();
        let mut m = Mat::zeros(vectors.len(), n);
        for (r, v) in vectors.iter().enumerate() {
            assert_eq!(v.space(), space, "subspace vector in wrong space");
            for c in 0..n {
                m.set(r, c, v.coeff(c).clone());
            }
        }
        let pivots = m.rref();
        let basis = (0..pivots.len())
            .map(|r| {
                let coeffs = (0..n).map(|c| m.get(r, c).clone()).collect();
                SuperVector::from_coeffs(space, coeffs).unwrap()
            })
            .collect();
        Subspace {
            space: space.clone(),
            basis,
        }
    }

    pub fn zero(space: &Space) -> Subspace {
        Subspace::from_vectors(space, Vec::new())
    }

    pub fn full(space: &Space) -> Subspace {
        let all = (0..space.dim())
            .map(|i| SuperVector::basis(space, i))
            .collect();
        Subspace::from_vectors(space, all)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SuperVector] {
        &self.basis
    }

    pub fn contains(&self, v: &SuperVector) -> bool {
        let extended = {
            let mut vs: Vec<SuperVector> = self.basis.clone();
            vs.push(v.clone());
            Subspace::from_vectors(&self.space, vs)
        };
        extended.dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// True when closed under parity projection.
    pub fn is_graded(&self) -> bool {
        self.basis.iter().all(|v| {
            self.contains(&v.component(Parity::Even)) && self.contains(&v.component(Parity::Odd))
        })
    }
}

/// Orthogonal complement {u : B(u, s) = 0 for all s in sub} of a subspace
/// with respect to a nondegenerate form.
pub fn perp(sub: &Subspace, form: &BilinearForm) -> Result<Subspace> {
    if form.space() != sub.space() {
        return Err(Error::DimensionMismatch(
            "form and subspace live in different spaces".into(),
        ));
    }
    if !form.is_nondegenerate() {
        return Err(Error::SingularForm(
            "perp requires a nondegenerate form".into(),
        ));
    }
    let space = sub.space();
    let n = space.dim();
    let mut m = Mat::zeros(sub.dim(), n);
    for (r, s) in sub.basis().iter().enumerate() {
        for c in 0..n {
            let u = SuperVector::basis(space, c);
            m.set(r, c, form.eval(&u, s)?);
        }
    }
    Ok(Subspace::from_vectors(
        space,
        m.kernel_basis()
            .into_iter()
            .map(|v| SuperVector::from_coeffs(space, v).unwrap())
            .collect(),
    ))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::scalar::int;
    use crate::superlinalg::{odot, wedge, Covector, SuperSpace};

    pub fn space_2_2() -> Space {
        SuperSpace::new(vec![
            ("x1".into(), Parity::Even),
            ("x2".into(), Parity::Even),
            ("y1".into(), Parity::Odd),
            ("y2".into(), Parity::Odd),
        ])
        .unwrap()
    }

    pub fn dual(space: &Space, label: &str) -> Covector {
        Covector::dual(space, label).unwrap()
    }

    pub fn g2() -> LieSuperalgebra {
        let space = space_2_2();
        LieSuperalgebra::from_table(
            "g2",
            &space,
            &[
                ("x1", "y1", &[("y2", int(1))]),
                ("y1", "y1", &[("x2", int(1))]),
            ],
        )
        .unwrap()
    }

    pub fn omega_g2(space: &Space) -> BilinearForm {
        wedge(&dual(space, "x1"), &dual(space, "x2"))
            .unwrap()
            .scale(&int(2))
            .add(
                &wedge(&dual(space, "y1"), &dual(space, "y2"))
                    .unwrap()
                    .scale(&int(-1)),
            )
            .unwrap()
    }

    pub fn bform_g2(space: &Space) -> BilinearForm {
        odot(&dual(space, "x1"), &dual(space, "x2"))
            .unwrap()
            .scale(&int(-1))
            .add(
                &odot(&dual(space, "y1"), &dual(space, "y2"))
                    .unwrap()
                    .scale(&int(-1)),
            )
            .unwrap()
    }

    pub fn g3() -> LieSuperalgebra {
        let space = space_2_2();
        LieSuperalgebra::from_table("g3", &space, &[("x1", "y1", &[("y2", int(1))])]).unwrap()
    }

    pub fn omega_g3(space: &Space) -> BilinearForm {
        wedge(&dual(space, "x1"), &dual(space, "y2"))
            .unwrap()
            .add(&wedge(&dual(space, "x2"), &dual(space, "y1")).unwrap())
            .unwrap()
    }

    pub fn g4() -> LieSuperalgebra {
        let space = space_2_2();
        LieSuperalgebra::from_table(
            "g4",
            &space,
            &[
                ("y1", "y1", &[("x1", int(1))]),
                ("y1", "y2", &[("x2", int(1))]),
            ],
        )
        .unwrap()
    }

    pub fn omega_g4(space: &Space) -> BilinearForm {
        wedge(&dual(space, "x1"), &dual(space, "y2"))
            .unwrap()
            .scale(&int(-2))
            .add(&wedge(&dual(space, "x2"), &dual(space, "y1")).unwrap())
            .unwrap()
    }

    pub fn bform_g4(space: &Space) -> BilinearForm {
        odot(&dual(space, "x1"), &dual(space, "y2"))
            .unwrap()
            .add(&odot(&dual(space, "x2"), &dual(space, "y1")).unwrap())
            .unwrap()
    }

    /// K + h3: [x1, x2] = x3 on a purely even 4-dim space.
    pub fn k_h3() -> LieSuperalgebra {
        let space =
            SuperSpace::new((1..=4).map(|i| (format!("x{i}"), Parity::Even)).collect()).unwrap();
        LieSuperalgebra::from_table("K+h3", &space, &[("x1", "x2", &[("x3", int(1))])]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::scalar::int;
    use crate::superlinalg::SuperSpace;

    #[test]
    fn bracket_values_and_antisymmetry() {
        let alg = g2();
        let space = alg.space().clone();
        let x1 = SuperVector::from_entries(&space, &[("x1", int(1))]).unwrap();
        let y1 = SuperVector::from_entries(&space, &[("y1", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(&space, &[("y2", int(1))]).unwrap();
        let x2 = SuperVector::from_entries(&space, &[("x2", int(1))]).unwrap();

        assert_eq!(alg.bracket(&x1, &y1).unwrap(), y2);
        assert_eq!(alg.bracket(&y1, &x1).unwrap(), -&y2);
        assert_eq!(alg.bracket(&y1, &y1).unwrap(), x2);
        assert!(alg.bracket(&y2, &y2).unwrap().is_zero());
    }

    #[test]
    fn validation_passes_on_examples() {
        for alg in [g2(), g3(), g4(), k_h3()] {
            let report = alg.validate_lie();
            assert!(report.is_clean(), "{}: {report}", alg.name());
        }
        let abelian = LieSuperalgebra::abelian(
            "ab",
            &SuperSpace::new(vec![("e".into(), Parity::Even)]).unwrap(),
        );
        assert!(abelian.validate_lie().is_clean());
    }

    #[test]
    fn validation_fails_on_bad_jacobi() {
        // [x1,y1] = y1, [y1,y1] = x1: [x1,[y1,y1]] = 0 but the right side is 2x1.
        let space = space_2_2();
        let alg = LieSuperalgebra::from_table(
            "bad",
            &space,
            &[
                ("x1", "y1", &[("y1", int(1))]),
                ("y1", "y1", &[("x1", int(1))]),
            ],
        )
        .unwrap();
        let report = alg.validate_lie();
        assert!(!report.is_clean());
        assert!(report
            .failures()
            .any(|e| e.code == "jacobi" && e.message.contains("x1, y1, y1")));
    }

    #[test]
    fn duplicate_entries_are_rejected() {
        let space = space_2_2();
        let result = LieSuperalgebra::from_table(
            "dup",
            &space,
            &[
                ("x1", "y1", &[("y2", int(1))]),
                ("y1", "x1", &[("y2", int(-1))]),
            ],
        );
        assert!(result.is_err());
    }

    #[test]
    fn center_and_derived() {
        let alg = g2();
        let space = alg.space();
        let x2 = SuperVector::from_entries(space, &[("x2", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(space, &[("y2", int(1))]).unwrap();
        let expected = Subspace::from_vectors(space, vec![x2, y2]);

        assert_eq!(alg.center(), expected);
        assert_eq!(alg.derived(), expected);
        assert!(alg.center().is_graded());

        let kh = k_h3();
        let ks = kh.space();
        let x3 = SuperVector::from_entries(ks, &[("x3", int(1))]).unwrap();
        let x4 = SuperVector::from_entries(ks, &[("x4", int(1))]).unwrap();
        assert_eq!(
            kh.center(),
            Subspace::from_vectors(ks, vec![x3.clone(), x4])
        );
        assert_eq!(kh.derived(), Subspace::from_vectors(ks, vec![x3]));

        let ab = LieSuperalgebra::abelian("ab", &space_2_2());
        assert_eq!(ab.center(), Subspace::full(ab.space()));
        assert_eq!(ab.derived().dim(), 0);
    }

    #[test]
    fn perp_examples() {
        let alg = g2();
        let space = alg.space();
        let omega = omega_g2(space);
        let p = perp(&alg.derived(), &omega).unwrap();
        assert_eq!(p, alg.center());

        // g3: derived-perp is strictly larger than the center.
        let alg3 = g3();
        let omega3 = omega_g3(alg3.space());
        let p3 = perp(&alg3.derived(), &omega3).unwrap();
        assert_eq!(p3.dim(), 3);
        assert_ne!(p3, alg3.center());
        assert!(p3.contains_subspace(&alg3.center()));

        assert_eq!(
            perp(&Subspace::zero(space), &omega).unwrap(),
            Subspace::full(space)
        );
        assert_eq!(
            p.dim(),
            space.dim() - alg.derived().dim(),
            "dim(perp) = dim - dim(sub)"
        );
    }

    #[test]
    fn derivation_checks() {
        use crate::superlinalg::tests_support::diag;
        let alg = g2();
        let space = alg.space();
        let delta = diag(space, &[int(-2), int(2), int(1), int(-1)]);
        assert!(alg.is_derivation(&delta).unwrap());

        let id = Endomorphism::identity(space);
        let witness = alg.derivation_witness(&id).unwrap();
        assert!(witness.is_some());

        let ab = LieSuperalgebra::abelian("ab", space);
        assert!(ab.is_derivation(&id).unwrap());
    }

    #[test]
    fn ad_is_bracket_respecting() {
        let alg = g2();
        let space = alg.space();
        let n = space.dim();
        for i in 0..n {
            let u = SuperVector::basis(space, i);
            let ad_u = alg.ad(&u).unwrap();
            assert_eq!(ad_u.parity(), space.parity(i));
            for j in 0..n {
                let v = SuperVector::basis(space, j);
                let ad_v = alg.ad(&v).unwrap();
                // ad_{[u,v]} = [ad_u, ad_v] (graded commutator)
                let lhs = alg.ad(&alg.bracket(&u, &v).unwrap()).unwrap();
                let rhs = ad_u.graded_commutator(&ad_v).unwrap();
                assert_eq!(lhs.matrix(), rhs.matrix());
            }
        }
    }

    #[test]
    fn basis_order_independence() {
        // Same algebra entered in a shuffled basis: invariant dimensions agree
        // and center/derived match after relabelling.
        let shuffled = SuperSpace::new(vec![
            ("y2".into(), Parity::Odd),
            ("x2".into(), Parity::Even),
            ("y1".into(), Parity::Odd),
            ("x1".into(), Parity::Even),
        ])
        .unwrap();
        let alg = LieSuperalgebra::from_table(
            "g2-shuffled",
            &shuffled,
            &[
                ("y1", "x1", &[("y2", int(-1))]),
                ("y1", "y1", &[("x2", int(1))]),
            ],
        )
        .unwrap();
        assert!(alg.validate_lie().is_clean());
        let center = alg.center();
        assert_eq!(center.dim(), 2);
        let x2 = SuperVector::from_entries(&shuffled, &[("x2", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(&shuffled, &[("y2", int(1))]).unwrap();
        assert!(center.contains(&x2) && center.contains(&y2));
        assert_eq!(alg.derived(), center);
    }
}

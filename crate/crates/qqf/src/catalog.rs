//! A small library of certified example algebras, stored as documents in the
//! interchange format so that the command-line tool, the tests, and library
//! consumers all read identical bytes, together with the Frobenius-tensor
//! construction for producing new flat structures from old.

use num_traits::Zero;

use crate::doc::AlgebraDocument;
use crate::error::{Error, Result};
use crate::liesuper::LieSuperalgebra;
use crate::report::ValidationReport;
use crate::scalar::{self, Scalar};
use crate::structures::{
    check_closed, check_flat, natural_product, quadratic_existence, InvertibilityVerdict,
    ProductTable, Qqf, Quadratic, QuasiFrobenius,
};
use crate::superlinalg::{
    BilinearForm, Endomorphism, Parity, Space, SuperSpace, SuperVector, Symmetry,
};

/// What a catalog entry claims about itself; certification verifies the claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// carries both a quasi-Frobenius and a quadratic structure, and is flat
    Qqf,
    /// carries a quasi-Frobenius structure only; certification attaches a
    /// negative certificate that no quadratic structure exists
    QuasiFrobenius,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    /// the serialized document; the single source of truth for the entry
    pub text: &'static str,
    /// free-text provenance: construction recipe and any convention notes
    pub notes: &'static str,
}

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "g2",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/g2.alg"),
        notes: "four-dimensional: [x1,y1]=y2, [y1,y1]=x2 with omega = 2 x1*^x2* - y1*^y2* \
                and bform = -x1*.x2* - y1*.y2*; rho and delta are derived from the two forms. \
                The invertible rho family is diag(-t, t | 2t, -2t) up to scale.",
    },
    CatalogEntry {
        name: "g3",
        kind: EntryKind::QuasiFrobenius,
        text: include_str!("../catalog/g3.alg"),
        notes: "four-dimensional: [x1,y1]=y2 with omega = x1*^y2* + x2*^y1*; \
                no quadratic structure exists: the orthogonal of the derived ideal \
                is strictly larger than the center.",
    },
    CatalogEntry {
        name: "g4",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/g4.alg"),
        notes: "four-dimensional: [y1,y1]=x1, [y1,y2]=x2 with odd omega = -2 x1*^y2* + x2*^y1* \
                and odd bform = x1*.y2* + x2*.y1*; rho and delta are derived from the two forms. \
                The rho family is invertible exactly when 2 lambda^2 + beta mu is nonzero.",
    },
    CatalogEntry {
        name: "K+h3",
        kind: EntryKind::QuasiFrobenius,
        text: include_str!("../catalog/k_h3.alg"),
        notes: "a line plus the Heisenberg algebra: [x1,x2]=x3 on a purely even \
                four-dimensional space, omega = x1*^x4* + x2*^x3*; no quadratic \
                structure exists (orthogonal of the derived ideal exceeds the center).",
    },
    CatalogEntry {
        name: "aff1",
        kind: EntryKind::QuasiFrobenius,
        text: include_str!("../catalog/aff1.alg"),
        notes: "the affine line: [x1,x2]=x2 with omega = x1*^x2*; quasi-Frobenius \
                but not flat — the curvature satisfies K(x1,x2)(x1) = -(2/9) x2.",
    },
    CatalogEntry {
        name: "de6-even",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/de6_even.alg"),
        notes: "even orthosymplectic double extension of the purely even abelian base \
                with omega_b = e1*^e4* + e2*^e3* and rho_b = diag(-2,-2,2,2) by \
                xi = E13 - E24, lambda = 1. Certified variant: the alternative \
                rho_b = diag(-2,2,-2,2) fails the extension operator hypothesis, and the \
                d-row brackets are [d,e3] = -e1, [d,e4] = e2 (the twist acts as -xi).",
    },
    CatalogEntry {
        name: "de6-odd",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/de6_odd.alg"),
        notes: "even orthosymplectic double extension of the purely odd abelian base \
                with omega_b = -e1*^e4* - e2*^e3* and rho_b = diag(-2,-2,2,2) by \
                xi = E13 + E24, lambda = 1. Convention note: the d-row brackets come out \
                as [d,e3] = -e1, [d,e4] = -e2 (the twist acts as -xi); a variant with \
                the opposite d-row signs is sometimes quoted.",
    },
    CatalogEntry {
        name: "de6-mixed",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/de6_mixed.alg"),
        notes: "even orthosymplectic double extension of the mixed abelian base \
                {e1,e2 | e3,e4} with omega_b = e1*^e2* - e3*^e4* and \
                rho_b = diag(1,-1,-2,2) by xi = E34, lambda = 1. Convention note: \
                [d,e4] = -e3 (the twist acts as -xi); a variant with the opposite \
                sign is sometimes quoted.",
    },
    CatalogEntry {
        name: "de6-peri",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/de6_peri.alg"),
        notes: "even periplectic double extension of the mixed abelian base \
                {e1,e2 | e3,e4} with omega_b = e1*^e3* + e2*^e4* and \
                rho_b = diag(2,-2,-2,2) by xi = E21 + E34, lambda = 1; \
                brackets [d,e1] = -e2, [d,e4] = -e3, [e1,e4] = 2e.",
    },
    CatalogEntry {
        name: "planar8",
        kind: EntryKind::Qqf,
        text: include_str!("../catalog/planar8.alg"),
        notes: "planar (two-dimensional) double extension of the periplectic abelian base \
                {f1,f2 | f3,f4} with omega_b = f1*^f3* + f2*^f4* and odd \
                rho_b(f1,f2,f3,f4) = (-2f4, -2f3, f2, -f1), by xi0 = 2 E21 + E34 and \
                xi1 = (3/2) E24 - E31 at lambda = 1. Convention note: the d-row twists \
                are xi0 - 2 xi0* and (-1)^{|u|}(xi1 - 2 xi1*); variants swapping the \
                roles of xi and its omega-adjoint in the d-rows admit no invertible \
                invariant rho and are rejected by the validator.",
    },
];

static FROBENIUS_ENTRIES: &[(&str, &str)] = &[
    ("K", include_str!("../catalog/frobenius_k.alg")),
    ("K[eps]", include_str!("../catalog/frobenius_dual.alg")),
];

pub fn list() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub fn frobenius_list() -> Vec<&'static str> {
    FROBENIUS_ENTRIES.iter().map(|(n, _)| *n).collect()
}

pub fn frobenius_text(name: &str) -> Result<&'static str> {
    FROBENIUS_ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub fn frobenius(name: &str) -> Result<FrobeniusAlgebra> {
    FrobeniusAlgebra::from_document(&AlgebraDocument::parse(frobenius_text(name)?)?)
}

/// The structure a certification produced, ready for further computation.
pub enum CertifiedStructure {
    Qqf(Qqf),
    QuasiFrobenius {
        alg: LieSuperalgebra,
        qf: QuasiFrobenius,
    },
}

impl CertifiedStructure {
    pub fn alg(&self) -> &LieSuperalgebra {
        match self {
            CertifiedStructure::Qqf(q) => q.alg(),
            CertifiedStructure::QuasiFrobenius { alg, .. } => alg,
        }
    }

    pub fn qf(&self) -> &QuasiFrobenius {
        match self {
            CertifiedStructure::Qqf(q) => q.qf(),
            CertifiedStructure::QuasiFrobenius { qf, .. } => qf,
        }
    }
}

pub struct Certification {
    pub structure: CertifiedStructure,
    pub flat: bool,
    /// witness that no even quadratic structure exists, when applicable
    pub negative_even: Option<String>,
    /// witness that no odd quadratic structure exists, when applicable
    pub negative_odd: Option<String>,
    /// FNV-1a hash of the rendered certification report, for regression pinning
    pub report_hash: u64,
    pub report: String,
}

fn fnv1a(text: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn verdict_witness(v: &InvertibilityVerdict) -> Option<String> {
    match v {
        InvertibilityVerdict::No(w) => Some(w.clone()),
        _ => None,
    }
}

impl CatalogEntry {
    pub fn document(&self) -> AlgebraDocument {
        // entry texts are validated at build time by `certify_all` tests
        AlgebraDocument::parse(self.text).expect("catalog entry text must parse")
    }

    /// Runs the full validator suite the entry claims to satisfy and returns
    /// the certified structure with a rendered report.
    pub fn certify(&self) -> Result<Certification> {
        let doc = AlgebraDocument::parse(self.text)?;
        let alg = doc.algebra()?;
        let lie = alg.validate_lie();
        if !lie.is_clean() {
            return Err(Error::Hypothesis(lie));
        }
        let omega = doc.form("omega")?;
        let qf = QuasiFrobenius::new(omega)?;
        let closed = check_closed(&alg, qf.omega());
        if !closed.is_clean() {
            return Err(Error::Hypothesis(closed));
        }

        let mut report = String::new();
        report.push_str(&format!("entry {}\n", self.name));
        report.push_str(&format!(
            "dimension {} ({} even, {} odd)\n",
            alg.dim(),
            alg.space().even_dim(),
            alg.space().odd_dim()
        ));
        report.push_str(&format!("omega flavor {}\n", qf.flavor().as_str()));
        report.push_str("lie axioms ok\nomega closed ok\n");

        match self.kind {
            EntryKind::Qqf => {
                let qqf = if doc.form_names().contains(&"bform") {
                    let quad = Quadratic::new(doc.form("bform")?)?;
                    Qqf::new(alg, qf, quad)?
                } else {
                    let rho = doc.endo("rho")?;
                    Qqf::from_rho(alg, qf, &rho)?
                };
                // when the document also stores rho/delta, they must match
                // the dictionaries derived from the forms
                if doc.endo_names().contains(&"rho") && doc.endo("rho")? != *qqf.rho() {
                    return Err(Error::Invalid(format!(
                        "entry {}: stored rho disagrees with the derived dictionary",
                        self.name
                    )));
                }
                if doc.endo_names().contains(&"delta") && doc.endo("delta")? != *qqf.delta() {
                    return Err(Error::Invalid(format!(
                        "entry {}: stored delta disagrees with the derived dictionary",
                        self.name
                    )));
                }
                let vr = qqf.validate()?;
                if !vr.is_clean() {
                    return Err(Error::Hypothesis(vr));
                }
                let flat = qqf.is_flat()?;
                if !flat {
                    return Err(Error::Invalid(format!(
                        "entry {}: claims a flat structure but the natural product has curvature",
                        self.name
                    )));
                }
                report.push_str("quadratic structure ok\nflat yes\n");
                let hash = fnv1a(&report);
                Ok(Certification {
                    structure: CertifiedStructure::Qqf(qqf),
                    flat,
                    negative_even: None,
                    negative_odd: None,
                    report_hash: hash,
                    report,
                })
            }
            EntryKind::QuasiFrobenius => {
                let even = quadratic_existence(&alg, &qf, Parity::Even)?;
                let odd = quadratic_existence(&alg, &qf, Parity::Odd)?;
                let negative_even = verdict_witness(&even.verdict);
                let negative_odd = verdict_witness(&odd.verdict);
                if matches!(even.verdict, InvertibilityVerdict::Yes(_))
                    || matches!(odd.verdict, InvertibilityVerdict::Yes(_))
                {
                    return Err(Error::Invalid(format!(
                        "entry {}: claims no quadratic structure, but one exists",
                        self.name
                    )));
                }
                let star = natural_product(&alg, &qf)?;
                let flat = check_flat(&star, &alg)?.is_none();
                report.push_str(&format!(
                    "quadratic structure none (even: {}; odd: {})\n",
                    negative_even.as_deref().unwrap_or("inconclusive"),
                    negative_odd.as_deref().unwrap_or("inconclusive"),
                ));
                report.push_str(&format!("flat {}\n", if flat { "yes" } else { "no" }));
                let hash = fnv1a(&report);
                Ok(Certification {
                    structure: CertifiedStructure::QuasiFrobenius { alg, qf },
                    flat,
                    negative_even,
                    negative_odd,
                    report_hash: hash,
                    report,
                })
            }
        }
    }
}

/// Certifies every entry; any failure aborts with the offending entry named.
pub fn certify_all() -> Result<Vec<(&'static str, Certification)>> {
    let mut out = Vec::new();
    for entry in ENTRIES {
        let cert = entry.certify().map_err(|e| {
            Error::Invalid(format!(
                "catalog entry {} failed certification: {e}",
                entry.name
            ))
        })?;
        out.push((entry.name, cert));
    }
    // the Frobenius documents must also build cleanly
    for (name, _) in FROBENIUS_ENTRIES {
        frobenius(name)?;
    }
    Ok(out)
}

/// An associative supercommutative algebra with an even symmetric invariant
/// nondegenerate form.
pub struct FrobeniusAlgebra {
    name: String,
    table: ProductTable,
    form: BilinearForm,
}

impl FrobeniusAlgebra {
    pub fn new(name: &str, table: ProductTable, form: BilinearForm) -> Result<FrobeniusAlgebra> {
        let space = table.space();
        if form.space() != space {
            return Err(Error::DimensionMismatch(
                "form and product table live in different spaces".into(),
            ));
        }
        let mut report = ValidationReport::new();
        if form.parity() != Parity::Even {
            report.fail("frobenius.form", "the form must be even".into());
        }
        if form.symmetry() != Symmetry::Symmetric {
            report.fail("frobenius.form", "the form must be symmetric".into());
        }
        if !form.is_nondegenerate() {
            report.fail("frobenius.form", "the form is degenerate".into());
        }
        let n = space.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = table.product_basis(i, j);
                let want = space.parity(i) + space.parity(j);
                if !ij.has_parity(want) {
                    report.fail(
                        "frobenius.homogeneous",
                        format!(
                            "{} . {} is not homogeneous of the product parity",
                            space.label(i),
                            space.label(j)
                        ),
                    );
                }
                // supercommutativity a.b = (-1)^{|a||b|} b.a
                let sign = space.parity(i).koszul(space.parity(j));
                if *ij != table.product_basis(j, i).scale(&sign) {
                    report.fail(
                        "frobenius.commutative",
                        format!(
                            "{} . {} differs from the graded transpose",
                            space.label(i),
                            space.label(j)
                        ),
                    );
                }
                for k in 0..n {
                    let bk = SuperVector::basis(space, k);
                    let left = table.product(ij, &bk)?;
                    let jk = table.product_basis(j, k);
                    let right = table.product(&SuperVector::basis(space, i), jk)?;
                    if left != right {
                        report.fail(
                            "frobenius.associative",
                            format!(
                                "({} . {}) . {} differs from {} . ({} . {})",
                                space.label(i),
                                space.label(j),
                                space.label(k),
                                space.label(i),
                                space.label(j),
                                space.label(k)
                            ),
                        );
                    }
                    // invariance Om(a.b, c) = Om(a, b.c)
                    if form.eval(ij, &bk)? != form.eval(&SuperVector::basis(space, i), jk)? {
                        report.fail(
                            "frobenius.invariant",
                            format!(
                                "Om({} . {}, {}) differs from Om({}, {} . {})",
                                space.label(i),
                                space.label(j),
                                space.label(k),
                                space.label(i),
                                space.label(j),
                                space.label(k)
                            ),
                        );
                    }
                }
            }
        }
        if !report.is_clean() {
            return Err(Error::Hypothesis(report));
        }
        Ok(FrobeniusAlgebra {
            name: name.to_string(),
            table,
            form,
        })
    }

    /// Reads a document whose `bracket` lines hold the multiplication table
    /// (completed by supercommutativity) and whose form is named `fform`.
    pub fn from_document(doc: &AlgebraDocument) -> Result<FrobeniusAlgebra> {
        let space = doc.space()?;
        let n = space.dim();
        let mut products: Vec<Option<SuperVector>> = vec![None; n * n];
        for b in &doc.brackets {
            let i = space.index_of(&b.left)?;
            let j = space.index_of(&b.right)?;
            let mut coeffs = vec![scalar::zero(); n];
            for (l, c) in &b.terms {
                coeffs[space.index_of(l)?] = c.clone();
            }
            products[i * n + j] = Some(SuperVector::from_coeffs(&space, coeffs)?);
        }
        let table = ProductTable::from_fn(&space, |i, j| {
            if let Some(v) = &products[i * n + j] {
                Ok(v.clone())
            } else if let Some(v) = &products[j * n + i] {
                let sign = space.parity(i).koszul(space.parity(j));
                Ok(v.scale(&sign))
            } else {
                Ok(SuperVector::zero(&space))
            }
        })?;
        let form = doc.form("fform")?;
        FrobeniusAlgebra::new(&doc.name, table, form)
    }

    /// The ground field viewed as a Frobenius algebra: one even generator
    /// `1` with `1 . 1 = 1` and `Om(1,1) = 1`.
    pub fn scalar_field() -> FrobeniusAlgebra {
        frobenius("K").expect("the scalar-field document is certified at build time")
    }

    /// Dual numbers: generators `1, eps` (both even), `eps . eps = 0`,
    /// `Om(1,eps) = Om(eps,1) = 1`, `Om(1,1) = 0`.
    pub fn dual_numbers() -> FrobeniusAlgebra {
        frobenius("K[eps]").expect("the dual-numbers document is certified at build time")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Space {
        self.table.space()
    }

    pub fn dim(&self) -> usize {
        self.table.space().dim()
    }

    pub fn table(&self) -> &ProductTable {
        &self.table
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }
}

/// Tensors a flat structure with a Frobenius algebra:
/// `[u (x) a, v (x) b] = (-1)^{|a||v|} [u,v] (x) (a . b)`, with the form
/// `(u (x) a, v (x) b) -> (-1)^{|a||v|} omega(u,v) Om(a,b)` and
/// `rho(u (x) a) = rho(u) (x) a`. The natural product of the result is
/// checked to be the tensor of the factors' products entrywise.
pub fn tensor_qqf(h: &Qqf, a: &FrobeniusAlgebra) -> Result<Qqf> {
    if !h.is_flat()? {
        return Err(Error::Invalid(
            "tensor construction requires a flat structure".into(),
        ));
    }
    let hs = h.space();
    let as_ = a.space();
    let (hn, an) = (hs.dim(), as_.dim());
    let tensor_label = |i: usize, p: usize| format!("{}.{}", hs.label(i), as_.label(p));
    let mut basis = Vec::with_capacity(hn * an);
    for i in 0..hn {
        for p in 0..an {
            basis.push((tensor_label(i, p), hs.parity(i) + as_.parity(p)));
        }
    }
    let space = SuperSpace::new(basis)?;
    let idx = |i: usize, p: usize| space.index_of(&tensor_label(i, p)).unwrap();

    // assemble [u (x) a, v (x) b]; only store one orientation per pair
    let mut entries: Vec<((usize, usize), SuperVector)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..hn {
        for p in 0..an {
            for j in 0..hn {
                for q in 0..an {
                    let (gi, gj) = (idx(i, p), idx(j, q));
                    if gi > gj || seen.contains(&(gi, gj)) {
                        continue;
                    }
                    let huv = h.alg().bracket_basis(i, j);
                    let apq = a.table().product_basis(p, q);
                    if huv.is_zero() || apq.is_zero() {
                        continue;
                    }
                    let sign = as_.parity(p).koszul(hs.parity(j));
                    let mut coeffs = vec![scalar::zero(); space.dim()];
                    for (k, c) in huv.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (r, d) in apq.coeffs().iter().enumerate() {
                            if d.is_zero() {
                                continue;
                            }
                            let slot = idx(k, r);
                            coeffs[slot] = coeffs[slot].clone() + &sign * c * d;
                        }
                    }
                    let v = SuperVector::from_coeffs(&space, coeffs)?;
                    if !v.is_zero() {
                        seen.insert((gi, gj));
                        entries.push(((gi, gj), v));
                    }
                }
            }
        }
    }
    let alg = LieSuperalgebra::new(
        &format!("{}(x){}", h.alg().name(), a.name()),
        &space,
        entries,
    )?;

    let mut omega_entries: Vec<(String, String, Scalar)> = Vec::new();
    for i in 0..hn {
        for p in 0..an {
            for j in 0..hn {
                for q in 0..an {
                    let v = h.omega().value(i, j) * a.form().value(p, q);
                    if !v.is_zero() {
                        let sign = as_.parity(p).koszul(hs.parity(j));
                        omega_entries.push((tensor_label(i, p), tensor_label(j, q), sign * v));
                    }
                }
            }
        }
    }
    let refs: Vec<(&str, &str, Scalar)> = omega_entries
        .iter()
        .map(|(l, r, c)| (l.as_str(), r.as_str(), c.clone()))
        .collect();
    let omega =
        BilinearForm::from_entries(&space, h.omega().parity(), h.omega().symmetry(), &refs)?;
    let qf = QuasiFrobenius::new(omega)?;

    let mut rho = Endomorphism::zero(&space, h.rho().parity());
    for i in 0..hn {
        for k in 0..hn {
            let c = h.rho().matrix().get(k, i);
            if c.is_zero() {
                continue;
            }
            for p in 0..an {
                rho = rho.add(&Endomorphism::matrix_unit(
                    &space,
                    &tensor_label(k, p),
                    &tensor_label(i, p),
                    c.clone(),
                )?)?;
            }
        }
    }
    let qqf = Qqf::from_rho(alg, qf, &rho)?;

    // postcondition: the natural product is the tensor of the factors'
    // natural products, with the same Koszul sign as the bracket
    let star = qqf.natural_product()?;
    let star_h = h.natural_product()?;
    let mut report = ValidationReport::new();
    for i in 0..hn {
        for p in 0..an {
            for j in 0..hn {
                for q in 0..an {
                    let got = star.product_basis(idx(i, p), idx(j, q));
                    let huv = star_h.product_basis(i, j);
                    let apq = a.table().product_basis(p, q);
                    let sign = as_.parity(p).koszul(hs.parity(j));
                    let mut coeffs = vec![scalar::zero(); space.dim()];
                    for (k, c) in huv.coeffs().iter().enumerate() {
                        for (r, d) in apq.coeffs().iter().enumerate() {
                            if !c.is_zero() && !d.is_zero() {
                                let slot = idx(k, r);
                                coeffs[slot] = coeffs[slot].clone() + &sign * c * d;
                            }
                        }
                    }
                    let want = SuperVector::from_coeffs(&space, coeffs)?;
                    if *got != want {
                        report.fail(
                            "tensor.star",
                            format!(
                                "({} (x) {}) * ({} (x) {}) = {got}, expected {want}",
                                hs.label(i),
                                as_.label(p),
                                hs.label(j),
                                as_.label(q)
                            ),
                        );
                    }
                }
            }
        }
    }
    if !report.is_clean() {
        return Err(Error::Hypothesis(report));
    }
    if !qqf.is_flat()? {
        return Err(Error::Invalid(
            "tensor construction produced a non-flat structure".into(),
        ));
    }
    Ok(qqf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::Isomorphism;
    use crate::scalar::{int, one, zero};

    #[test]
    fn all_entries_certify() {
        let certs = certify_all().unwrap();
        assert_eq!(certs.len(), list().len());
        // exactly g2 and g4 among the dim-4 non-abelian entries are QQF
        let qqf: Vec<&str> = certs
            .iter()
            .filter(|(n, c)| {
                matches!(c.structure, CertifiedStructure::Qqf(_))
                    && c.structure.alg().dim() == 4
                    && *n != "aff1"
            })
            .map(|(n, _)| *n)
            .collect();
        assert_eq!(qqf, vec!["g2", "g4"]);
        for (name, cert) in &certs {
            match *name {
                "g3" | "K+h3" => {
                    assert!(cert.negative_even.is_some(), "{name} needs a witness");
                    assert!(cert.negative_odd.is_some());
                }
                "aff1" => assert!(!cert.flat),
                _ => assert!(cert.flat, "{name} must be flat"),
            }
        }
    }

    #[test]
    fn entry_texts_are_canonical() {
        for entry in ENTRIES {
            let doc = entry.document();
            assert_eq!(doc.serialize(), entry.text, "entry {}", entry.name);
            assert_eq!(doc.name, entry.name);
        }
        for (name, text) in FROBENIUS_ENTRIES {
            let doc = AlgebraDocument::parse(text).unwrap();
            assert_eq!(&doc.serialize(), text, "frobenius entry {name}");
        }
    }

    #[test]
    fn unknown_entry_is_reported() {
        assert!(matches!(get("g5"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn perturbed_entry_fails_certification() {
        // flip one structure constant of g2: Jacobi or closedness must object
        let entry = get("g2").unwrap();
        let text = entry
            .text
            .replace("bracket y1 y1 = x2 1", "bracket y1 y1 = x2 2");
        assert_ne!(text, entry.text);
        let broken = CatalogEntry {
            name: "g2-broken",
            kind: EntryKind::Qqf,
            text: Box::leak(text.into_boxed_str()),
            notes: "",
        };
        assert!(broken.certify().is_err());
    }

    #[test]
    fn tensor_with_scalar_field_is_identity() {
        let entry = get("g2").unwrap();
        let cert = entry.certify().unwrap();
        let CertifiedStructure::Qqf(h) = cert.structure else {
            panic!("g2 is QQF")
        };
        let g = tensor_qqf(&h, &FrobeniusAlgebra::scalar_field()).unwrap();
        assert_eq!(g.space().dim(), 4);
        let images: Vec<SuperVector> = (0..4)
            .map(|i| {
                let l = format!("{}.1", h.space().label(i));
                SuperVector::basis(g.space(), g.space().index_of(&l).unwrap())
            })
            .collect();
        let phi = Isomorphism::new(h.space(), g.space(), images).unwrap();
        assert!(phi.is_qqf_isomorphism(&h, &g));
    }

    #[test]
    fn tensor_with_dual_numbers_is_flat_qqf() {
        let entry = get("g2").unwrap();
        let cert = entry.certify().unwrap();
        let CertifiedStructure::Qqf(h) = cert.structure else {
            panic!("g2 is QQF")
        };
        let g = tensor_qqf(&h, &FrobeniusAlgebra::dual_numbers()).unwrap();
        assert_eq!(g.space().dim(), 8);
        assert!(g.is_flat().unwrap());
        assert!(g.validate().unwrap().is_clean());
    }

    #[test]
    fn grassmann_form_is_forced_degenerate() {
        // one odd generator: any even symmetric form vanishes identically on
        // (1, th) by parity and on (th, th) by supersymmetry
        let space =
            SuperSpace::new(vec![("1".into(), Parity::Even), ("th".into(), Parity::Odd)]).unwrap();
        let one_v = SuperVector::basis(&space, 0);
        let table = ProductTable::from_fn(&space, |i, j| {
            Ok(match (i, j) {
                (0, 0) => one_v.clone(),
                (0, 1) | (1, 0) => SuperVector::basis(&space, 1),
                _ => SuperVector::zero(&space),
            })
        })
        .unwrap();
        let form = BilinearForm::from_entries(
            &space,
            Parity::Even,
            Symmetry::Symmetric,
            &[("1", "1", one())],
        )
        .unwrap();
        match FrobeniusAlgebra::new("grassmann", table, form) {
            Err(Error::Hypothesis(report)) => {
                assert!(report.failures().any(|e| e.code == "frobenius.form"));
            }
            other => panic!("expected degenerate-form failure, got {:?}", other.is_ok()),
        }
        let _ = (int(0), zero());
    }
}

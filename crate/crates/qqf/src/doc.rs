//! Line-based text interchange format for algebras, forms and endomorphisms.
//!
//! A document is UTF-8 text; blank lines and lines starting with `#` are
//! ignored. Every other line starts with a keyword:
//!
//! ```text
//! name g2
//! basis x1 even
//! basis y1 odd
//! bracket y1 y1 = x1 1
//! form omega even antisymmetric
//! form omega : x1 x2 2
//! endo rho even
//! endo rho : x1 x1 -1/2
//! ```
//!
//! Rationals are written `p/q` or `n`, exactly. Unknown keywords, duplicate
//! basis labels, duplicate bracket pairs, duplicate form or endomorphism
//! values, and references to undeclared labels are all rejected. The parser
//! canonicalizes ordering (basis order for entries, lexicographic for form
//! and endomorphism names), so `parse . serialize` is the identity on parsed
//! values and serialization is byte-deterministic.

use std::collections::BTreeSet;

use num_traits::Zero;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::liesuper::LieSuperalgebra;
use crate::scalar::{self, Scalar};
use crate::superlinalg::{
    BilinearForm, Endomorphism, Parity, Space, SuperSpace, SuperVector, Symmetry,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    /// the value as a combination of basis labels, in basis order
    pub terms: Vec<(String, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormDoc {
    pub name: String,
    pub parity: Parity,
    pub symmetry: Symmetry,
    /// (left, right, value) triples in basis order
    pub values: Vec<(String, String, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoDoc {
    pub name: String,
    pub parity: Parity,
    /// (row, column, value) triples in basis order
    pub entries: Vec<(String, String, Scalar)>,
}

/// Parsed form of the text format; always held in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub name: String,
    pub basis: Vec<(String, Parity)>,
    pub brackets: Vec<BracketEntry>,
    pub forms: Vec<FormDoc>,
    pub endos: Vec<EndoDoc>,
    /// named vectors (`vector b0 = e1 1 e2 -1/2`), used by extension-data
    /// documents; an empty term list is the zero vector
    pub vectors: Vec<(String, Vec<(String, Scalar)>)>,
    /// named rational constants (`scalar lambda 1/2`)
    pub scalars: Vec<(String, Scalar)>,
}

fn parity_from(tok: &str, line: usize) -> Result<Parity> {
    match tok {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        other => Err(Error::Parse {
            line,
            message: format!("expected `even` or `odd`, found `{other}`"),
        }),
    }
}

fn symmetry_from(tok: &str, line: usize) -> Result<Symmetry> {
    match tok {
        "symmetric" => Ok(Symmetry::Symmetric),
        "antisymmetric" => Ok(Symmetry::Antisymmetric),
        other => Err(Error::Parse {
            line,
            message: format!("expected `symmetric` or `antisymmetric`, found `{other}`"),
        }),
    }
}

fn rational_from(tok: &str, line: usize) -> Result<Scalar> {
    scalar::parse(tok).map_err(|_| Error::Parse {
        line,
        message: format!("malformed rational `{tok}`"),
    })
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<AlgebraDocument> {
        let mut name: Option<String> = None;
        let mut basis: Vec<(String, Parity)> = Vec::new();
        let mut brackets: Vec<BracketEntry> = Vec::new();
        let mut forms: Vec<FormDoc> = Vec::new();
        let mut endos: Vec<EndoDoc> = Vec::new();
        let mut vectors: Vec<(String, Vec<(String, Scalar)>)> = Vec::new();
        let mut scalars: Vec<(String, Scalar)> = Vec::new();

        let err = |line: usize, message: String| Error::Parse { line, message };
        let label_index = |basis: &[(String, Parity)], l: &str, line: usize| {
            basis
                .iter()
                .position(|(b, _)| b == l)
                .ok_or_else(|| err(line, format!("unknown basis label `{l}`")))
        };

        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            match toks[0] {
                "name" => {
                    if toks.len() != 2 {
                        return Err(err(line, "expected `name <identifier>`".into()));
                    }
                    if name.is_some() {
                        return Err(err(line, "duplicate `name` field".into()));
                    }
                    name = Some(toks[1].to_string());
                }
                "basis" => {
                    if toks.len() != 3 {
                        return Err(err(line, "expected `basis <label> <even|odd>`".into()));
                    }
                    if basis.iter().any(|(b, _)| b == toks[1]) {
                        return Err(err(line, format!("duplicate basis label `{}`", toks[1])));
                    }
                    basis.push((toks[1].to_string(), parity_from(toks[2], line)?));
                }
                "bracket" => {
                    // bracket <l> <r> = <label> <rat> [<label> <rat>]...
                    if toks.len() < 6 || toks[3] != "=" || !toks.len().is_multiple_of(2) {
                        return Err(err(
                            line,
                            "expected `bracket <left> <right> = <label> <rational> ...`".into(),
                        ));
                    }
                    let (left, right) = (toks[1].to_string(), toks[2].to_string());
                    label_index(&basis, &left, line)?;
                    label_index(&basis, &right, line)?;
                    if brackets.iter().any(|b| b.left == left && b.right == right) {
                        return Err(err(
                            line,
                            format!("duplicate bracket entry for ({left}, {right})"),
                        ));
                    }
                    let mut terms = Vec::new();
                    for pair in toks[4..].chunks(2) {
                        label_index(&basis, pair[0], line)?;
                        if terms.iter().any(|(l, _)| l == pair[0]) {
                            return Err(err(
                                line,
                                format!("duplicate term label `{}` in bracket", pair[0]),
                            ));
                        }
                        terms.push((pair[0].to_string(), rational_from(pair[1], line)?));
                    }
                    brackets.push(BracketEntry { left, right, terms });
                }
                "form" => {
                    if toks.len() == 4 && toks[2] != ":" {
                        // form <name> <parity> <symmetry>
                        if forms.iter().any(|f| f.name == toks[1]) {
                            return Err(err(line, format!("duplicate form `{}`", toks[1])));
                        }
                        forms.push(FormDoc {
                            name: toks[1].to_string(),
                            parity: parity_from(toks[2], line)?,
                            symmetry: symmetry_from(toks[3], line)?,
                            values: Vec::new(),
                        });
                    } else if toks.len() == 6 && toks[2] == ":" {
                        // form <name> : <l> <r> <rat>
                        let form =
                            forms
                                .iter_mut()
                                .find(|f| f.name == toks[1])
                                .ok_or_else(|| {
                                    err(line, format!("value for undeclared form `{}`", toks[1]))
                                })?;
                        label_index(&basis, toks[3], line)?;
                        label_index(&basis, toks[4], line)?;
                        if form
                            .values
                            .iter()
                            .any(|(l, r, _)| l == toks[3] && r == toks[4])
                        {
                            return Err(err(
                                line,
                                format!("duplicate form value for ({}, {})", toks[3], toks[4]),
                            ));
                        }
                        form.values.push((
                            toks[3].to_string(),
                            toks[4].to_string(),
                            rational_from(toks[5], line)?,
                        ));
                    } else {
                        return Err(err(
                            line,
                            "expected `form <name> <parity> <symmetry>` or `form <name> : <left> <right> <rational>`".into(),
                        ));
                    }
                }
                "endo" => {
                    if toks.len() == 3 {
                        if endos.iter().any(|e| e.name == toks[1]) {
                            return Err(err(line, format!("duplicate endomorphism `{}`", toks[1])));
                        }
                        endos.push(EndoDoc {
                            name: toks[1].to_string(),
                            parity: parity_from(toks[2], line)?,
                            entries: Vec::new(),
                        });
                    } else if toks.len() == 6 && toks[2] == ":" {
                        let endo =
                            endos
                                .iter_mut()
                                .find(|e| e.name == toks[1])
                                .ok_or_else(|| {
                                    err(
                                        line,
                                        format!("entry for undeclared endomorphism `{}`", toks[1]),
                                    )
                                })?;
                        label_index(&basis, toks[3], line)?;
                        label_index(&basis, toks[4], line)?;
                        if endo
                            .entries
                            .iter()
                            .any(|(r, c, _)| r == toks[3] && c == toks[4])
                        {
                            return Err(err(
                                line,
                                format!(
                                    "duplicate endomorphism entry for ({}, {})",
                                    toks[3], toks[4]
                                ),
                            ));
                        }
                        endo.entries.push((
                            toks[3].to_string(),
                            toks[4].to_string(),
                            rational_from(toks[5], line)?,
                        ));
                    } else {
                        return Err(err(
                            line,
                            "expected `endo <name> <parity>` or `endo <name> : <row> <col> <rational>`".into(),
                        ));
                    }
                }
                "vector" => {
                    // vector <name> = [<label> <rat>]...
                    if toks.len() < 3 || toks[2] != "=" || toks.len() % 2 != 1 {
                        return Err(err(
                            line,
                            "expected `vector <name> = [<label> <rational>]...`".into(),
                        ));
                    }
                    if vectors.iter().any(|(n, _)| n == toks[1]) {
                        return Err(err(line, format!("duplicate vector `{}`", toks[1])));
                    }
                    let mut terms = Vec::new();
                    for pair in toks[3..].chunks(2) {
                        label_index(&basis, pair[0], line)?;
                        if terms.iter().any(|(l, _)| l == pair[0]) {
                            return Err(err(
                                line,
                                format!("duplicate term label `{}` in vector", pair[0]),
                            ));
                        }
                        terms.push((pair[0].to_string(), rational_from(pair[1], line)?));
                    }
                    vectors.push((toks[1].to_string(), terms));
                }
                "scalar" => {
                    if toks.len() != 3 {
                        return Err(err(line, "expected `scalar <name> <rational>`".into()));
                    }
                    if scalars.iter().any(|(n, _)| n == toks[1]) {
                        return Err(err(line, format!("duplicate scalar `{}`", toks[1])));
                    }
                    scalars.push((toks[1].to_string(), rational_from(toks[2], line)?));
                }
                other => {
                    return Err(err(line, format!("unknown field `{other}`")));
                }
            }
        }

        let name = name.ok_or(Error::Parse {
            line: 0,
            message: "missing `name` field".into(),
        })?;
        if basis.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "document declares no basis".into(),
            });
        }

        let mut doc = AlgebraDocument {
            name,
            basis,
            brackets,
            forms,
            endos,
            vectors,
            scalars,
        };
        doc.canonicalize();
        Ok(doc)
    }

    /// Sorts everything into the canonical serialization order: bracket and
    /// value triples by basis position, forms and endomorphisms by name.
    fn canonicalize(&mut self) {
        let order: Vec<String> = self.basis.iter().map(|(b, _)| b.clone()).collect();
        let pos = |l: &str| order.iter().position(|b| b == l).unwrap();
        self.brackets.sort_by_key(|b| (pos(&b.left), pos(&b.right)));
        for b in &mut self.brackets {
            b.terms.sort_by_key(|(l, _)| pos(l));
            b.terms.retain(|(_, c)| !c.is_zero());
        }
        self.brackets.retain(|b| !b.terms.is_empty());
        self.forms.sort_by(|a, b| a.name.cmp(&b.name));
        for f in &mut self.forms {
            f.values.sort_by_key(|(l, r, _)| (pos(l), pos(r)));
            f.values.retain(|(_, _, c)| !c.is_zero());
        }
        self.endos.sort_by(|a, b| a.name.cmp(&b.name));
        for e in &mut self.endos {
            e.entries.sort_by_key(|(r, c, _)| (pos(r), pos(c)));
            e.entries.retain(|(_, _, c)| !c.is_zero());
        }
        self.vectors.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, terms) in &mut self.vectors {
            terms.sort_by_key(|(l, _)| pos(l));
            terms.retain(|(_, c)| !c.is_zero());
        }
        self.scalars.sort_by(|a, b| a.0.cmp(&b.0));
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut doc = self.clone();
        doc.canonicalize();
        writeln!(out, "name {}", doc.name).unwrap();
        for (label, parity) in &doc.basis {
            writeln!(out, "basis {label} {}", parity.as_str()).unwrap();
        }
        for b in &doc.brackets {
            write!(out, "bracket {} {} =", b.left, b.right).unwrap();
            for (l, c) in &b.terms {
                write!(out, " {l} {}", scalar::format(c)).unwrap();
            }
            out.push('\n');
        }
        for f in &doc.forms {
            writeln!(
                out,
                "form {} {} {}",
                f.name,
                f.parity.as_str(),
                f.symmetry.as_str()
            )
            .unwrap();
            for (l, r, c) in &f.values {
                writeln!(out, "form {} : {l} {r} {}", f.name, scalar::format(c)).unwrap();
            }
        }
        for e in &doc.endos {
            writeln!(out, "endo {} {}", e.name, e.parity.as_str()).unwrap();
            for (r, c, v) in &e.entries {
                writeln!(out, "endo {} : {r} {c} {}", e.name, scalar::format(v)).unwrap();
            }
        }
        for (name, terms) in &doc.vectors {
            write!(out, "vector {name} =").unwrap();
            for (l, c) in terms {
                write!(out, " {l} {}", scalar::format(c)).unwrap();
            }
            out.push('\n');
        }
        for (name, v) in &doc.scalars {
            writeln!(out, "scalar {name} {}", scalar::format(v)).unwrap();
        }
        out
    }

    // ---- conversions into library types ----

    pub fn space(&self) -> Result<Space> {
        SuperSpace::new(self.basis.clone())
    }

    pub fn algebra(&self) -> Result<LieSuperalgebra> {
        let space = self.space()?;
        let mut entries = Vec::new();
        for b in &self.brackets {
            let i = space.index_of(&b.left)?;
            let j = space.index_of(&b.right)?;
            if i > j {
                return Err(Error::Invalid(format!(
                    "bracket ({}, {}) is not stored with left index <= right index",
                    b.left, b.right
                )));
            }
            let mut coeffs = vec![scalar::zero(); space.dim()];
            for (l, c) in &b.terms {
                coeffs[space.index_of(l)?] = c.clone();
            }
            entries.push(((i, j), SuperVector::from_coeffs(&space, coeffs)?));
        }
        LieSuperalgebra::new(&self.name, &space, entries)
    }

    pub fn form_names(&self) -> Vec<&str> {
        self.forms.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn endo_names(&self) -> Vec<&str> {
        self.endos.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn form(&self, name: &str) -> Result<BilinearForm> {
        let f = self
            .forms
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::Invalid(format!("document has no form `{name}`")))?;
        let space = self.space()?;
        let entries: Vec<(&str, &str, Scalar)> = f
            .values
            .iter()
            .map(|(l, r, c)| (l.as_str(), r.as_str(), c.clone()))
            .collect();
        BilinearForm::from_entries(&space, f.parity, f.symmetry, &entries)
    }

    pub fn vector(&self, name: &str) -> Result<SuperVector> {
        let (_, terms) = self
            .vectors
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Invalid(format!("document has no vector `{name}`")))?;
        let space = self.space()?;
        let entries: Vec<(&str, Scalar)> =
            terms.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
        SuperVector::from_entries(&space, &entries)
    }

    /// The named vector, or zero when it is not declared.
    pub fn vector_or_zero(&self, name: &str) -> Result<SuperVector> {
        if self.vectors.iter().any(|(n, _)| n == name) {
            self.vector(name)
        } else {
            Ok(SuperVector::zero(&self.space()?))
        }
    }

    pub fn scalar_value(&self, name: &str) -> Result<Scalar> {
        self.scalars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::Invalid(format!("document has no scalar `{name}`")))
    }

    /// The named scalar, or zero when it is not declared.
    pub fn scalar_or_zero(&self, name: &str) -> Scalar {
        self.scalars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(scalar::zero)
    }

    pub fn endo(&self, name: &str) -> Result<Endomorphism> {
        let e = self
            .endos
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Invalid(format!("document has no endomorphism `{name}`")))?;
        let space = self.space()?;
        let mut result = Endomorphism::zero(&space, e.parity);
        for (r, c, v) in &e.entries {
            result = result.add(&Endomorphism::matrix_unit(&space, r, c, v.clone())?)?;
        }
        Ok(result)
    }

    // ---- conversions from library types ----

    pub fn from_algebra(alg: &LieSuperalgebra) -> AlgebraDocument {
        let space = alg.space();
        let basis = space
            .iter()
            .map(|(_, l, p)| (l.to_string(), p))
            .collect::<Vec<_>>();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (&(i, j), _) in alg.entries() {
            pairs.insert((i, j));
        }
        let mut brackets = Vec::new();
        for (i, j) in pairs {
            let v = alg.bracket_basis(i, j);
            let terms: Vec<(String, Scalar)> = v
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (space.label(k).to_string(), c.clone()))
                .collect();
            if !terms.is_empty() {
                brackets.push(BracketEntry {
                    left: space.label(i).to_string(),
                    right: space.label(j).to_string(),
                    terms,
                });
            }
        }
        let mut doc = AlgebraDocument {
            name: alg.name().to_string(),
            basis,
            brackets,
            forms: Vec::new(),
            endos: Vec::new(),
            vectors: Vec::new(),
            scalars: Vec::new(),
        };
        doc.canonicalize();
        doc
    }

    /// An empty document over the space, for extension-data files.
    pub fn over_space(name: &str, space: &Space) -> AlgebraDocument {
        AlgebraDocument {
            name: name.to_string(),
            basis: space.iter().map(|(_, l, p)| (l.to_string(), p)).collect(),
            brackets: Vec::new(),
            forms: Vec::new(),
            endos: Vec::new(),
            vectors: Vec::new(),
            scalars: Vec::new(),
        }
    }

    pub fn with_vector(mut self, name: &str, v: &SuperVector) -> AlgebraDocument {
        let space = v.space();
        let terms: Vec<(String, Scalar)> = v
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (space.label(i).to_string(), c.clone()))
            .collect();
        self.vectors.push((name.to_string(), terms));
        self.canonicalize();
        self
    }

    pub fn with_scalar(mut self, name: &str, v: &Scalar) -> AlgebraDocument {
        self.scalars.push((name.to_string(), v.clone()));
        self.canonicalize();
        self
    }

    pub fn with_form(mut self, name: &str, form: &BilinearForm) -> AlgebraDocument {
        let space = form.space();
        let mut values = Vec::new();
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                let v = form.value(i, j);
                if !v.is_zero() {
                    values.push((
                        space.label(i).to_string(),
                        space.label(j).to_string(),
                        v.clone(),
                    ));
                }
            }
        }
        self.forms.push(FormDoc {
            name: name.to_string(),
            parity: form.parity(),
            symmetry: form.symmetry(),
            values,
        });
        self.canonicalize();
        self
    }

    pub fn with_endo(mut self, name: &str, endo: &Endomorphism) -> AlgebraDocument {
        let space = endo.space();
        let mut entries = Vec::new();
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                let v = endo.matrix().get(i, j);
                if !v.is_zero() {
                    entries.push((
                        space.label(i).to_string(),
                        space.label(j).to_string(),
                        v.clone(),
                    ));
                }
            }
        }
        self.endos.push(EndoDoc {
            name: name.to_string(),
            parity: endo.parity(),
            entries,
        });
        self.canonicalize();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::fixtures::{g2, omega_g2, space_2_2};
    use crate::scalar::{frac, int};
    use crate::superlinalg::tests_support::diag;

    fn g2_doc() -> AlgebraDocument {
        let space = space_2_2();
        AlgebraDocument::from_algebra(&g2())
            .with_form("omega", &omega_g2(&space))
            .with_endo(
                "rho",
                &diag(&space, &[frac(-1, 2), frac(1, 2), int(1), int(-1)]),
            )
    }

    #[test]
    fn round_trip_is_identity() {
        let doc = g2_doc();
        let text = doc.serialize();
        let parsed = AlgebraDocument::parse(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn conversions_recover_the_algebra() {
        let doc = g2_doc();
        let alg = doc.algebra().unwrap();
        assert_eq!(alg.space(), &space_2_2());
        assert!(alg.validate_lie().is_clean());
        let omega = doc.form("omega").unwrap();
        assert_eq!(&omega, &omega_g2(&space_2_2()));
        let rho = doc.endo("rho").unwrap();
        assert_eq!(rho.parity(), Parity::Even);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = "name x\nbasis a even\nflavor periplectic\n";
        match AlgebraDocument::parse(text) {
            Err(Error::Parse { line: 3, message }) => {
                assert!(message.contains("unknown field"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        let dup_bracket = "name x\nbasis a odd\nbracket a a = a 1\nbracket a a = a 2\n";
        assert!(matches!(
            AlgebraDocument::parse(dup_bracket),
            Err(Error::Parse { line: 4, .. })
        ));
        let dup_basis = "name x\nbasis a even\nbasis a odd\n";
        assert!(matches!(
            AlgebraDocument::parse(dup_basis),
            Err(Error::Parse { line: 3, .. })
        ));
        let dup_form_value =
            "name x\nbasis a even\nbasis b even\nform w even antisymmetric\nform w : a b 1\nform w : a b 1\n";
        assert!(matches!(
            AlgebraDocument::parse(dup_form_value),
            Err(Error::Parse { line: 6, .. })
        ));
    }

    #[test]
    fn malformed_rational_is_rejected() {
        let text = "name x\nbasis a odd\nbracket a a = a 1.5\n";
        assert!(matches!(
            AlgebraDocument::parse(text),
            Err(Error::Parse { line: 3, .. })
        ));
        let text = "name x\nbasis a odd\nbracket a a = a 1/0\n";
        assert!(matches!(
            AlgebraDocument::parse(text),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn unsorted_input_parses_to_canonical_order() {
        let text = "name x\nbasis a even\nbasis b even\nbracket a b = b 1\nendo z even\nendo z : b a 1\nendo f odd\n";
        let doc = AlgebraDocument::parse(text).unwrap();
        // endo names come out lexicographically sorted
        assert_eq!(doc.endo_names(), vec!["f", "z"]);
        let reparsed = AlgebraDocument::parse(&doc.serialize()).unwrap();
        assert_eq!(reparsed, doc);
    }
}

//! Command-line front-end: validation, analysis, extensions, reductions and
//! the certified catalog, all over the text interchange format.
//!
//! Exit codes: 0 = clean, 1 = semantic failure (a validator objected),
//! 2 = malformed input (unparsable document or unusable file).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qqf::catalog::{self, CertifiedStructure, FrobeniusAlgebra};
use qqf::doc::AlgebraDocument;
use qqf::error::Error;
use qqf::extensions::planar::{planar_qqf_extend, PlanarExtensionData};
use qqf::extensions::reduce::{central_reduce, planar_reduce};
use qqf::extensions::{qqf_double_extend, ExtensionData, ExtensionKind, Isomorphism};
use qqf::liesuper::perp;
use qqf::structures::{
    check_closed, check_flat, curvature, dimension_checks, natural_product, quadratic_existence,
    InvertibilityVerdict, Qqf, Quadratic, QuasiFrobenius,
};
use qqf::superlinalg::{Parity, SuperVector};

#[derive(Parser)]
#[command(
    name = "qqf",
    about = "exact tools for flat quasi-Frobenius superalgebras",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie axioms, homogeneity and form flags of a document
    Validate { file: PathBuf },
    /// Report center, derived ideal, orthogonals, the natural product,
    /// flatness and quadratic existence for a document with a form `omega`
    Analyze { file: PathBuf },
    /// Double-extend the algebra in FILE by the data document
    Extend {
        file: PathBuf,
        /// even-ortho, odd-ortho, even-peri, odd-peri, or planar
        #[arg(long)]
        kind: String,
        /// data document: endo xi (or xi0/xi1), vectors and scalars
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert a double extension: extract the base, the data and a witness
    Reduce {
        file: PathBuf,
        /// directory for base.alg, data.alg, reconstruction.alg, witness.txt
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tensor the structure in FILE with a Frobenius algebra document
    Tensor {
        file: PathBuf,
        frobenius: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Access the built-in certified catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the entry names
    List,
    /// Print notes and the certification report for one entry
    Show { name: String },
    /// Write an entry's document bytes
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn read_doc(path: &Path) -> Result<AlgebraDocument, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    AlgebraDocument::parse(&text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Builds the full quadratic structure a document carries: a `bform` takes
/// precedence, otherwise a stored `rho` is used.
fn qqf_from_doc(doc: &AlgebraDocument) -> Result<Qqf, Error> {
    let alg = doc.algebra()?;
    let omega = doc.form("omega")?;
    let qf = QuasiFrobenius::new(omega)?;
    if doc.form_names().contains(&"bform") {
        let quad = Quadratic::new(doc.form("bform")?)?;
        Qqf::new(alg, qf, quad)
    } else if doc.endo_names().contains(&"rho") {
        Qqf::from_rho(alg, qf, &doc.endo("rho")?)
    } else {
        Err(Error::Invalid(
            "document carries neither a `bform` form nor a `rho` endomorphism".into(),
        ))
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Validate { file } => cmd_validate(&file),
        Command::Analyze { file } => cmd_analyze(&file),
        Command::Extend {
            file,
            kind,
            data,
            out,
        } => cmd_extend(&file, &kind, &data, &out),
        Command::Reduce { file, out } => cmd_reduce(&file, &out),
        Command::Tensor {
            file,
            frobenius,
            out,
        } => cmd_tensor(&file, &frobenius, &out),
        Command::Catalog { action } => cmd_catalog(action),
    }
}

fn cmd_validate(file: &Path) -> Result<ExitCode, Error> {
    let doc = read_doc(file)?;
    let mut clean = true;
    let mut out = String::new();
    writeln!(out, "name {}", doc.name).unwrap();

    match doc.algebra() {
        Ok(alg) => {
            let report = alg.validate_lie();
            if report.is_clean() {
                writeln!(out, "lie axioms ok").unwrap();
            } else {
                clean = false;
                write!(out, "{report}").unwrap();
            }
        }
        Err(e) => {
            clean = false;
            writeln!(out, "FAIL [algebra] {e}").unwrap();
        }
    }
    for name in doc.form_names() {
        match doc.form(name) {
            Ok(form) => match form.validate() {
                Ok(()) => writeln!(
                    out,
                    "form {name} ok ({} {})",
                    form.parity().as_str(),
                    form.symmetry().as_str()
                )
                .unwrap(),
                Err(e) => {
                    clean = false;
                    writeln!(out, "FAIL [form.{name}] {e}").unwrap();
                }
            },
            Err(e) => {
                clean = false;
                writeln!(out, "FAIL [form.{name}] {e}").unwrap();
            }
        }
    }
    for name in doc.endo_names() {
        match doc.endo(name) {
            Ok(endo) => writeln!(out, "endo {name} ok ({})", endo.parity().as_str()).unwrap(),
            Err(e) => {
                clean = false;
                writeln!(out, "FAIL [endo.{name}] {e}").unwrap();
            }
        }
    }
    print!("{out}");
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn show_subspace(out: &mut String, label: &str, sub: &qqf::liesuper::Subspace) {
    write!(out, "{label}: dimension {}", sub.dim()).unwrap();
    for v in sub.basis() {
        write!(out, "; {v}").unwrap();
    }
    out.push('\n');
}

fn cmd_analyze(file: &Path) -> Result<ExitCode, Error> {
    let doc = read_doc(file)?;
    let alg = doc.algebra()?;
    let lie = alg.validate_lie();
    if !lie.is_clean() {
        print!("{lie}");
        return Ok(ExitCode::from(1));
    }
    let omega = doc.form("omega")?;
    let qf = QuasiFrobenius::new(omega)?;
    let space = alg.space().clone();

    let mut out = String::new();
    writeln!(out, "name {}", doc.name).unwrap();
    writeln!(
        out,
        "dimension {} ({} even, {} odd)",
        space.dim(),
        space.even_dim(),
        space.odd_dim()
    )
    .unwrap();
    writeln!(out, "omega flavor {}", qf.flavor().as_str()).unwrap();

    let closed = check_closed(&alg, qf.omega());
    if closed.is_clean() {
        writeln!(out, "omega closed yes").unwrap();
    } else {
        write!(out, "{closed}").unwrap();
        print!("{out}");
        return Ok(ExitCode::from(1));
    }

    let center = alg.center();
    let derived = alg.derived();
    show_subspace(&mut out, "center", &center);
    show_subspace(&mut out, "derived", &derived);
    let dperp = perp(&derived, qf.omega())?;
    show_subspace(&mut out, "perp(derived)", &dperp);
    writeln!(
        out,
        "perp(derived) equals center: {}",
        if dperp == center { "yes" } else { "no" }
    )
    .unwrap();

    let star = natural_product(&alg, &qf)?;
    writeln!(out, "natural product:").unwrap();
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            let p = star.product_basis(i, j);
            if !p.is_zero() {
                writeln!(out, "  {} * {} = {p}", space.label(i), space.label(j)).unwrap();
            }
        }
    }
    match check_flat(&star, &alg)? {
        None => writeln!(out, "flat yes").unwrap(),
        Some((i, j)) => {
            let u = SuperVector::basis(&space, i);
            let v = SuperVector::basis(&space, j);
            let k = curvature(&star, &alg, &u, &v)?;
            writeln!(
                out,
                "flat no; curvature K({}, {}) is nonzero:",
                space.label(i),
                space.label(j)
            )
            .unwrap();
            for m in 0..space.dim() {
                let img = k.apply(&SuperVector::basis(&space, m))?;
                if !img.is_zero() {
                    writeln!(
                        out,
                        "  K({}, {})({}) = {img}",
                        space.label(i),
                        space.label(j),
                        space.label(m)
                    )
                    .unwrap();
                }
            }
        }
    }

    for parity in [Parity::Even, Parity::Odd] {
        let qe = quadratic_existence(&alg, &qf, parity)?;
        match &qe.verdict {
            InvertibilityVerdict::Yes(_) => writeln!(
                out,
                "quadratic structure ({} rho): yes, {}-parameter family",
                parity.as_str(),
                qe.family.len()
            )
            .unwrap(),
            InvertibilityVerdict::No(w) => writeln!(
                out,
                "quadratic structure ({} rho): no ({w})",
                parity.as_str()
            )
            .unwrap(),
            InvertibilityVerdict::Inconclusive => writeln!(
                out,
                "quadratic structure ({} rho): inconclusive ({}-dimensional family, no invertible sample)",
                parity.as_str(),
                qe.family.len()
            )
            .unwrap(),
        }
    }

    if doc.form_names().contains(&"bform") || doc.endo_names().contains(&"rho") {
        let qqf = qqf_from_doc(&doc)?;
        let dims = dimension_checks(&qqf);
        if dims.is_clean() {
            writeln!(out, "dimension theorems ok").unwrap();
        } else {
            write!(out, "{dims}").unwrap();
        }
    }

    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn central_data_from_doc(doc: &AlgebraDocument) -> Result<ExtensionData, Error> {
    Ok(ExtensionData::quadratic(
        doc.endo("xi")?,
        doc.vector_or_zero("b0")?,
        doc.vector_or_zero("a")?,
        doc.scalar_or_zero("lambda"),
        doc.scalar_or_zero("t"),
    ))
}

fn planar_data_from_doc(doc: &AlgebraDocument) -> Result<PlanarExtensionData, Error> {
    Ok(PlanarExtensionData {
        xi0: doc.endo("xi0")?,
        xi1: doc.endo("xi1")?,
        b0: doc.vector_or_zero("b0")?,
        b1: doc.vector_or_zero("b1")?,
        c0: doc.vector_or_zero("c0")?,
        c1: doc.vector_or_zero("c1")?,
        t_cap: doc.scalar_or_zero("T"),
        a0: doc.vector_or_zero("a0")?,
        a1: doc.vector_or_zero("a1")?,
        lambda: doc.scalar_or_zero("lambda"),
        t: doc.scalar_or_zero("t"),
    })
}

fn qqf_to_doc(name: &str, q: &Qqf) -> AlgebraDocument {
    let mut doc = AlgebraDocument::from_algebra(q.alg())
        .with_form("omega", q.omega())
        .with_endo("rho", q.rho());
    doc.name = name.to_string();
    doc
}

fn cmd_extend(
    file: &Path,
    kind: &str,
    data_file: &Path,
    out: &Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let base_doc = read_doc(file)?;
    let data_doc = read_doc(data_file)?;
    if base_doc.basis != data_doc.basis {
        return Err(Error::Invalid(
            "data document must be declared over the base document's basis".into(),
        ));
    }
    let base = qqf_from_doc(&base_doc)?;
    let ext = if kind == "planar" {
        planar_qqf_extend(&base, &planar_data_from_doc(&data_doc)?)?
    } else {
        qqf_double_extend(
            ExtensionKind::from_str(kind)?,
            &base,
            &central_data_from_doc(&data_doc)?,
        )?
    };
    let doc = qqf_to_doc(&format!("{}.ext", base_doc.name), &ext);
    emit(out, &doc.serialize())?;
    Ok(ExitCode::SUCCESS)
}

fn witness_text(kind: &str, witness: &Isomorphism) -> String {
    let mut out = String::new();
    writeln!(out, "kind {kind}").unwrap();
    writeln!(out, "isomorphism reconstruction -> input verified").unwrap();
    for (i, label, _) in witness.source().iter() {
        let img = witness
            .apply(&SuperVector::basis(witness.source(), i))
            .unwrap();
        writeln!(out, "witness {label} -> {img}").unwrap();
    }
    out
}

fn cmd_reduce(file: &Path, out: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let doc = read_doc(file)?;
    let g = qqf_from_doc(&doc)?;
    let base_name = format!("{}.base", doc.name);

    let (base_doc, data_doc, recon_doc, witness) = if g.rho().parity() == Parity::Even {
        let red = central_reduce(&g)?;
        let data_doc = AlgebraDocument::over_space(&format!("{}.data", doc.name), red.base.space())
            .with_endo("xi", &red.data.xi)
            .with_vector("b0", &red.data.b0)
            .with_vector("a", &red.data.a)
            .with_scalar("lambda", &red.data.lambda)
            .with_scalar("t", &red.data.t);
        (
            qqf_to_doc(&base_name, &red.base),
            data_doc,
            qqf_to_doc(&format!("{base_name}.ext"), &red.reconstruction),
            witness_text(red.kind.as_str(), &red.witness),
        )
    } else {
        let red = planar_reduce(&g)?;
        let data_doc = AlgebraDocument::over_space(&format!("{}.data", doc.name), red.base.space())
            .with_endo("xi0", &red.data.xi0)
            .with_endo("xi1", &red.data.xi1)
            .with_vector("b0", &red.data.b0)
            .with_vector("b1", &red.data.b1)
            .with_vector("c0", &red.data.c0)
            .with_vector("c1", &red.data.c1)
            .with_vector("a0", &red.data.a0)
            .with_vector("a1", &red.data.a1)
            .with_scalar("T", &red.data.t_cap)
            .with_scalar("lambda", &red.data.lambda)
            .with_scalar("t", &red.data.t);
        (
            qqf_to_doc(&base_name, &red.base),
            data_doc,
            qqf_to_doc(&format!("{base_name}.ext"), &red.reconstruction),
            witness_text("planar", &red.witness),
        )
    };

    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Invalid(format!("cannot create {}: {e}", dir.display())))?;
            emit(&Some(dir.join("base.alg")), &base_doc.serialize())?;
            emit(&Some(dir.join("data.alg")), &data_doc.serialize())?;
            emit(
                &Some(dir.join("reconstruction.alg")),
                &recon_doc.serialize(),
            )?;
            emit(&Some(dir.join("witness.txt")), &witness)?;
        }
        None => {
            print!("# ---- base\n{}", base_doc.serialize());
            print!("# ---- data\n{}", data_doc.serialize());
            print!("# ---- reconstruction\n{}", recon_doc.serialize());
            print!("# ---- witness\n{witness}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tensor(file: &Path, frob_file: &Path, out: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let h_doc = read_doc(file)?;
    let f_doc = read_doc(frob_file)?;
    let h = qqf_from_doc(&h_doc)?;
    let a = FrobeniusAlgebra::from_document(&f_doc)?;
    let g = catalog::tensor_qqf(&h, &a)?;
    let doc = qqf_to_doc(g.alg().name(), &g);
    emit(out, &doc.serialize())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(action: CatalogAction) -> Result<ExitCode, Error> {
    match action {
        CatalogAction::List => {
            for name in catalog::list() {
                let entry = catalog::get(name)?;
                let kind = match entry.kind {
                    catalog::EntryKind::Qqf => "qqf",
                    catalog::EntryKind::QuasiFrobenius => "quasi-frobenius",
                };
                println!("{name} ({kind})");
            }
            for name in catalog::frobenius_list() {
                println!("{name} (frobenius)");
            }
            Ok(ExitCode::SUCCESS)
        }
        CatalogAction::Show { name } => {
            let entry = catalog::get(&name)?;
            let cert = entry.certify()?;
            println!("name {}", entry.name);
            println!("notes: {}", entry.notes);
            print!("{}", cert.report);
            println!("report hash {:016x}", cert.report_hash);
            if let CertifiedStructure::Qqf(q) = &cert.structure {
                println!(
                    "rho parity {}; flat {}",
                    q.rho().parity().as_str(),
                    if cert.flat { "yes" } else { "no" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        CatalogAction::Export { name, out } => {
            let text = match catalog::get(&name) {
                Ok(entry) => entry.text,
                Err(_) => catalog::frobenius_text(&name)?,
            };
            emit(&out, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

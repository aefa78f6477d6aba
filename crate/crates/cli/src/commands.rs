use std::fmt;
use std::path::Path;

use modqec::architecture::{
    derive_layout, loop_assignment_table, verify_respects, ArchitectureLayout, ModuleFactor,
};
use modqec::complex::{
    group_symmetric_ldpc_complex, random_ldpc_complex, repetition_complex, surface_complex,
    ChainComplex, LdpcShape, Topology,
};
use modqec::css::{css_from_complex, weight_audit, CodeParams};
use modqec::distance::{
    cohomological_exhaustive_distance, cohomological_graphlike_distance,
    cohomological_randomized_distance_upper, exhaustive_distance, graphlike_distance, randomized_distance_upper, zp_product_codistance, zp_product_distance,
    Distance, DistanceResult,
};
use modqec::gf2::Gf2Matrix;
use modqec::io::{
    load_complex, load_json, save_complex, save_json, to_json, write_alist, write_mtx,
    write_text, ArchitectureSummary, ComplexDocument, ConnectionDocument, DistanceEntry,
    KunnethCheck, LoadedComplex, ReportDocument, SparseMatrix,
};
use modqec::product::{
    balanced_kunneth_dim, balanced_product, derive_connection, fiber_bundle_product,
    kunneth_homology_dim, tensor_product, Connection, GroupAction, Product, ProductKind,
};

use crate::{
    BuildCmd, Cli, Command, DistanceCmd, ExportArgs, FactorArg, FormatArg, GradeArgs, LayoutArgs,
    LoopsArgs, ParamsArgs, ProductCmd, ShapeArgs, TopologyArg, VerifyArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// Inputs parse but violate a mathematical or architectural condition.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<modqec::io::IoError> for CliError {
    fn from(e: modqec::io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn domain(context: impl fmt::Display, e: impl fmt::Display) -> CliError {
    CliError::Domain(format!("{context}: {e}"))
}

fn name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Build(cmd) => build(cmd, cli.seed),
        Command::Product(cmd) => product(cmd),
        Command::Layout(args) => layout(args),
        Command::Params(args) => params(args),
        Command::Distance(cmd) => distance(cmd, cli.seed),
        Command::VerifyArch(args) => verify_arch(args),
        Command::Loops(args) => loops(args),
        Command::Export(args) => export(args),
    }
}

fn build(cmd: &BuildCmd, seed: u64) -> Result<()> {
    let (loaded, out) = match cmd {
        BuildCmd::Repetition {
            length,
            topology,
            out,
        } => {
            let t = match topology {
                TopologyArg::Open => Topology::Open,
                TopologyArg::Cyclic => Topology::Cyclic,
            };
            let c = repetition_complex(*length, t).map_err(|e| domain("repetition", e))?;
            (LoadedComplex::plain(c), out)
        }
        BuildCmd::Surface { length, out } => {
            let c = surface_complex(*length).map_err(|e| domain("surface", e))?;
            (LoadedComplex::plain(c), out)
        }
        BuildCmd::RandomLdpc { shape, rank, out } => {
            let shape = ldpc_shape(shape);
            let c = match rank {
                Some(r) => random_ldpc_complex(&shape, *r, seed),
                None => group_symmetric_ldpc_complex(&shape, 1, None, seed).map(|(c, _)| c),
            }
            .map_err(|e| domain("random-ldpc", e))?;
            (LoadedComplex::plain(c), out)
        }
        BuildCmd::GroupLdpc {
            shape,
            group_order,
            rank,
            out,
        } => {
            let (c, action) =
                group_symmetric_ldpc_complex(&ldpc_shape(shape), *group_order, *rank, seed)
                    .map_err(|e| domain("group-ldpc", e))?;
            let loaded = LoadedComplex {
                action: Some(action),
                ..LoadedComplex::plain(c)
            };
            (loaded, out)
        }
    };
    save_complex(out, &loaded)?;
    println!(
        "{}: dims {:?} (top grade first)",
        out.display(),
        loaded.complex.dims_top_first()
    );
    Ok(())
}

fn ldpc_shape(a: &ShapeArgs) -> LdpcShape {
    let mut shape = LdpcShape::new(a.rows, a.cols, a.max_row_wt, a.max_col_wt)
        .with_min_col_wt(a.min_col_wt);
    if let Some(min) = a.min_row_wt {
        shape = shape.with_row_weights(min, a.max_row_wt);
    }
    shape
}

/// The document's action, or block shifts of `order` when it has none.
fn action_of(path: &Path, l: &LoadedComplex, order: Option<usize>) -> Result<GroupAction> {
    match (&l.action, order) {
        (Some(a), Some(m)) if a.order() != m => Err(domain(
            path.display(),
            format!("document action has order {}, --group-order is {m}", a.order()),
        )),
        (Some(a), _) => Ok(a.clone()),
        (None, Some(m)) => {
            GroupAction::block_cyclic(m, l.complex.dims()).map_err(|e| domain(path.display(), e))
        }
        (None, None) => Err(CliError::Input(format!(
            "{}: field `group_action`: missing and no --group-order given",
            path.display()
        ))),
    }
}

fn save_product(out: &Path, p: Product, connection: Option<Connection>) -> Result<()> {
    let loaded = LoadedComplex {
        complex: p.complex,
        action: None,
        connection,
        basis: Some(p.basis),
    };
    save_complex(out, &loaded)?;
    println!(
        "{}: dims {:?} (top grade first)",
        out.display(),
        loaded.complex.dims_top_first()
    );
    Ok(())
}

fn product(cmd: &ProductCmd) -> Result<()> {
    match cmd {
        ProductCmd::Tensor { left, right, out } => {
            let (l, r) = (load_complex(left)?, load_complex(right)?);
            let p = tensor_product(&l.complex, &r.complex).map_err(|e| domain("tensor", e))?;
            save_product(out, p, None)
        }
        ProductCmd::Balanced {
            left,
            right,
            group_order,
            out,
        } => {
            let (l, r) = (load_complex(left)?, load_complex(right)?);
            let al = action_of(left, &l, *group_order)?;
            let ar = action_of(right, &r, *group_order)?;
            let p = balanced_product(&l.complex, &r.complex, &al, &ar)
                .map_err(|e| domain("balanced", e))?;
            save_product(out, p, None)
        }
        ProductCmd::Fiber {
            base,
            fiber,
            connection,
            derive,
            group_order,
            base_out,
            out,
        } => {
            let (b, f) = (load_complex(base)?, load_complex(fiber)?);
            let (base_complex, phi) = if *derive {
                let ab = action_of(base, &b, *group_order)?;
                let af = action_of(fiber, &f, *group_order)?;
                derive_connection(&b.complex, &f.complex, &ab, &af)
                    .map_err(|e| domain("derive connection", e))?
            } else {
                let phi = match connection {
                    Some(path) => load_connection(path)?,
                    None => Connection::identity(&b.complex, &f.complex),
                };
                (b.complex, phi)
            };
            if let Some(path) = base_out {
                save_complex(path, &LoadedComplex::plain(base_complex.clone()))?;
            }
            let p = fiber_bundle_product(&base_complex, &f.complex, &phi)
                .map_err(|e| domain("fiber bundle", e))?;
            save_product(out, p, Some(phi))
        }
    }
}

/// A connection document, or a complex document carrying a connection.
fn load_connection(path: &Path) -> Result<Connection> {
    let value: serde_json::Value = load_json(path)?;
    let parse_err = |e: serde_json::Error| CliError::Input(format!("{}: {e}", path.display()));
    if value.get("boundaries").is_some() {
        let doc: ComplexDocument = serde_json::from_value(value).map_err(parse_err)?;
        let loaded = doc.to_loaded().map_err(|e| CliError::from(e.at(path)))?;
        loaded.connection.ok_or_else(|| {
            CliError::Input(format!("{}: field `connection`: missing", path.display()))
        })
    } else {
        let doc: ConnectionDocument = serde_json::from_value(value).map_err(parse_err)?;
        doc.to_connection().map_err(|e| CliError::from(e.at(path)))
    }
}

fn layout(args: &LayoutArgs) -> Result<()> {
    let slots = load_complex(&args.slots)?;
    let modules = load_complex(&args.modules)?;
    let phi = args.connection.as_deref().map(load_connection).transpose()?;
    let layout = derive_layout(&slots.complex, &modules.complex, phi.as_ref())
        .map_err(|e| domain("layout", e))?;
    save_json(&args.out, &layout)?;
    println!(
        "{}: {} modules x {} qubits, {} intra edges, {} inter edges",
        args.out.display(),
        layout.num_modules(),
        layout.qubits_per_module,
        layout.intra_edges.len(),
        layout.inter_edges.len()
    );
    Ok(())
}

fn load_report(path: Option<&Path>) -> Result<ReportDocument> {
    match path {
        Some(p) if p.exists() => Ok(load_json(p)?),
        _ => Ok(ReportDocument::new()),
    }
}

fn emit_report(path: Option<&Path>, report: &ReportDocument) -> Result<()> {
    match path {
        Some(p) => save_json(p, report)?,
        None => print!("{}", to_json(report)),
    }
    Ok(())
}

fn params(args: &ParamsArgs) -> Result<()> {
    let loaded = load_complex(&args.complex)?;
    let code = css_from_complex(&loaded.complex, args.qubit_grade)
        .map_err(|e| domain(args.complex.display(), e))?;
    let mut report = ReportDocument::new();
    report.source = Some(name(&args.complex));
    let mut params = CodeParams::of(&code);
    report.weight_audit = Some(weight_audit(&code, args.ldpc_bound));
    if let (Some(lp), Some(rp)) = (&args.left, &args.right) {
        let (l, r) = (load_complex(lp)?, load_complex(rp)?);
        let kind = loaded.basis.as_ref().map_or(ProductKind::Tensor, |b| b.kind);
        let g = args.qubit_grade;
        let predicted = match kind {
            ProductKind::Tensor => {
                Some(kunneth_homology_dim(&l.complex, &r.complex, g).map_err(|e| domain("Künneth", e))?)
            }
            ProductKind::Balanced { order } => {
                let al = action_of(lp, &l, args.group_order.or(Some(order)))?;
                let ar = action_of(rp, &r, args.group_order.or(Some(order)))?;
                match balanced_kunneth_dim(&l.complex, &r.complex, &al, &ar, g) {
                    Ok(k) => Some(k),
                    Err(e) => {
                        params.notes.push(format!("no homology prediction: {e}"));
                        None
                    }
                }
            }
            ProductKind::FiberBundle => {
                params.notes.push("no homology prediction for twisted products".into());
                None
            }
        };
        report.kunneth = predicted.map(|p| KunnethCheck {
            predicted: p,
            computed: params.k,
            agrees: p == params.k,
        });
    }
    println!("n={} k={}", params.n, params.k);
    let disagrees = report.kunneth.as_ref().is_some_and(|k| !k.agrees);
    report.params = Some(params);
    emit_report(args.out.as_deref(), &report)?;
    if disagrees {
        return Err(CliError::Domain("homology prediction disagrees with rank count".into()));
    }
    Ok(())
}

fn record(out: Option<&Path>, entry: DistanceEntry, seed: Option<u64>, source: String) -> Result<()> {
    let value = entry
        .result
        .value
        .map_or_else(|| "none".to_string(), |d| d.to_string());
    println!("d={value} ({})", entry.result.kind);
    let mut report = load_report(out)?;
    report.source.get_or_insert(source);
    if seed.is_some() {
        report.seed = seed;
    }
    report.add_distance(entry);
    emit_report(out, &report)
}

fn distance(cmd: &DistanceCmd, seed: u64) -> Result<()> {
    match cmd {
        DistanceCmd::Exhaustive { target, budget } => {
            let c = load_complex(&target.complex)?.complex;
            let r = if target.cohomological {
                cohomological_exhaustive_distance(&c, target.grade, *budget)
            } else {
                exhaustive_distance(&c, target.grade, *budget)
            }
            .map_err(|e| domain(target.complex.display(), e))?;
            record_grade(target, "exhaustive", r, None)
        }
        DistanceCmd::Graphlike { target, max_states } => {
            let c = load_complex(&target.complex)?.complex;
            let r = if target.cohomological {
                cohomological_graphlike_distance(&c, target.grade, *max_states)
            } else {
                graphlike_distance(&c, target.grade, *max_states)
            }
            .map_err(|e| domain(target.complex.display(), e))?;
            record_grade(target, "graphlike", r, None)
        }
        DistanceCmd::Randomized { target, trials } => {
            let c = load_complex(&target.complex)?.complex;
            let r = if target.cohomological {
                cohomological_randomized_distance_upper(&c, target.grade, *trials, seed)
            } else {
                randomized_distance_upper(&c, target.grade, *trials, seed)
            }
            .map_err(|e| domain(target.complex.display(), e))?;
            record_grade(target, "randomized", r, Some(seed))
        }
        DistanceCmd::Zp {
            left,
            right,
            grade,
            cohomological,
            left_distances,
            right_distances,
            budget,
            out,
        } => {
            let a = load_complex(left)?.complex;
            let b = load_complex(right)?.complex;
            let da = factor_distances(left, &a, left_distances.as_deref(), *cohomological, *budget)?;
            let db = factor_distances(right, &b, right_distances.as_deref(), *cohomological, *budget)?;
            let r = if *cohomological {
                zp_product_codistance(&a, &b, *grade, &da, &db)
            } else {
                zp_product_distance(&a, &b, *grade, &da, &db)
            }
            .map_err(|e| domain("zp", e))?;
            let entry = DistanceEntry {
                method: "zp".into(),
                grade: *grade,
                cohomological: *cohomological,
                result: r,
            };
            record(out.as_deref(), entry, None, format!("{} x {}", name(left), name(right)))
        }
    }
}

fn record_grade(t: &GradeArgs, method: &str, r: DistanceResult, seed: Option<u64>) -> Result<()> {
    let entry = DistanceEntry {
        method: method.into(),
        grade: t.grade,
        cohomological: t.cohomological,
        result: r,
    };
    record(t.out.as_deref(), entry, seed, name(&t.complex))
}

/// Given exact distances, or computed ones at every grade: graphlike where
/// it applies, exhaustive otherwise.
fn factor_distances(
    path: &Path,
    c: &ChainComplex,
    given: Option<&[String]>,
    cohomological: bool,
    budget: u64,
) -> Result<Vec<DistanceResult>> {
    match given {
        Some(list) => list
            .iter()
            .map(|s| {
                s.parse::<Distance>()
                    .map(DistanceResult::exact)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            })
            .collect(),
        None => (0..c.num_terms())
            .map(|g| {
                let fast = if cohomological {
                    cohomological_graphlike_distance(c, g, budget)
                } else {
                    graphlike_distance(c, g, budget)
                };
                fast.or_else(|_| {
                    if cohomological {
                        cohomological_exhaustive_distance(c, g, budget)
                    } else {
                        exhaustive_distance(c, g, budget)
                    }
                })
                .map_err(|e| domain(format!("{} grade {g}", path.display()), e))
            })
            .collect(),
    }
}

fn load_product(path: &Path) -> Result<Product> {
    let loaded = load_complex(path)?;
    let basis = loaded.basis.ok_or_else(|| {
        CliError::Input(format!("{}: field `product_basis`: missing", path.display()))
    })?;
    Ok(Product {
        complex: loaded.complex,
        basis,
    })
}

fn verify_arch(args: &VerifyArgs) -> Result<()> {
    let product = load_product(&args.product)?;
    let layout: ArchitectureLayout = load_json(&args.layout)?;
    let factor = match args.module_factor {
        Some(FactorArg::Left) => ModuleFactor::Left,
        Some(FactorArg::Right) => ModuleFactor::Right,
        None => ModuleFactor::default_for(product.basis.kind),
    };
    let report = verify_respects(&product, &layout, factor).map_err(|e| domain("verify-arch", e))?;
    if let Some(path) = &args.details {
        save_json(path, &report)?;
    }
    let summary = ArchitectureSummary::new(&report, layout.num_modules(), layout.qubits_per_module);
    println!(
        "{} violations; {} intra, {} inter ({} twisted) edges used",
        summary.violations, summary.intra_edges_used, summary.inter_edges_used, summary.twisted_edges_used
    );
    for v in report.violations.iter().take(10) {
        println!("  {v:?}");
    }
    let mut doc = load_report(args.out.as_deref())?;
    doc.source.get_or_insert_with(|| name(&args.product));
    doc.architecture = Some(summary);
    if args.out.is_some() {
        emit_report(args.out.as_deref(), &doc)?;
    }
    if report.respects() {
        Ok(())
    } else {
        Err(CliError::Domain(format!(
            "{} checks act outside the layout",
            report.violations.len()
        )))
    }
}

fn loops(args: &LoopsArgs) -> Result<()> {
    let product = load_product(&args.product)?;
    let table = loop_assignment_table(&product, args.qubit_grade).map_err(|e| domain("loops", e))?;
    match &args.out {
        Some(p) => save_json(p, &table)?,
        None => print!("{}", to_json(&table)),
    }
    Ok(())
}

fn export(args: &ExportArgs) -> Result<()> {
    let c = load_complex(&args.complex)?.complex;
    let matrix: Gf2Matrix = match args.which.as_str() {
        "hx" | "hz" => {
            let code = css_from_complex(&c, args.qubit_grade)
                .map_err(|e| domain(args.complex.display(), e))?;
            if args.which == "hx" {
                code.h_x
            } else {
                code.h_z
            }
        }
        w => {
            let grade: usize = w
                .strip_prefix("boundary:")
                .and_then(|g| g.parse().ok())
                .ok_or_else(|| {
                    CliError::Input(format!("--which: expected hx, hz or boundary:<grade>, got {w:?}"))
                })?;
            c.boundary(grade)
                .cloned()
                .ok_or_else(|| domain(args.complex.display(), format!("no boundary at grade {grade}")))?
        }
    };
    let text = match args.format {
        FormatArg::Alist => write_alist(&matrix),
        FormatArg::Mtx => write_mtx(&matrix),
        FormatArg::Json => to_json(&SparseMatrix::from_matrix(&matrix)),
    };
    match &args.out {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

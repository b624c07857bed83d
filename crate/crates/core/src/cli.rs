//! Command-line front end. Every command prints one JSON document (or CSV
//! for tables); domain errors become `{"error": {"code", "message"}}` with
//! exit status 1, usage errors exit with status 2.

use std::collections::BTreeMap;
use std::fs;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ar::ArData;
use crate::counts::Engine;
use crate::desing::{count_filtrations, fibre_polynomial, variety_dims, verify_desingularization, FlagType, FlagTypeJson};
use crate::error::{Error, Result};
use crate::hall::{base_change, canonical_basis, convolve, monomial_to_pbw, Basis, BaseChangeMatrix, HallElement};
use crate::laurent::LaurentPoly;
use crate::partition::{an_partition, d4_partition, default_partition, is_directed, monomial_of, DirectedPartition};
use crate::poly::CountPolynomial;
use crate::quiver::{DimVector, DynkinType, Quiver};
use crate::reps::{degenerates, end_and_orbit_dim, hom_ext_classes, RepClass};
use crate::strata::{component_candidates, gamma_dot, gamma_paths, is_special, stratum_count, stratum_dims};

#[derive(Debug, Parser)]
#[command(name = "quiverlab", version, about = "Exact computations for Dynkin quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Quiver as "a->b,b->c"; isolated vertices may be listed alone.
    #[arg(long, short)]
    pub quiver: String,
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV where the output is a table.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive roots in canonical order.
    Roots(Common),
    /// The Auslander-Reiten quiver.
    Ar(Common),
    /// Hom and Ext dimensions of two classes, or the table for indecomposables.
    Hom {
        #[command(flatten)]
        common: Common,
        /// Class as a JSON file or inline JSON; give it twice.
        #[arg(long)]
        class: Vec<String>,
    },
    /// Isoclasses of a dimension vector.
    Classes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dimvector: String,
    },
    /// Whether the second class lies in the orbit closure of the first.
    Degen {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 1)]
        class: Vec<String>,
    },
    /// A directed partition and its check.
    Partition {
        #[command(flatten)]
        common: Common,
        /// "default", "preset" or a JSON partition.
        #[arg(long, default_value = "default")]
        partition: String,
    },
    /// The monomial function of a class.
    Monomial {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "default")]
        partition: String,
    },
    /// Desingularization data.
    Desing {
        #[command(subcommand)]
        action: DesingCmd,
    },
    /// Strata of the fibre over a class.
    Strata {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long)]
        monomial: String,
        /// Emit the extension graph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Whether the quiver is special.
    Special(Common),
    /// Hall polynomials and products.
    Hall {
        #[command(subcommand)]
        action: HallCmd,
    },
    /// Elements of a basis of one weight in PBW coordinates.
    Basis {
        #[arg(value_parser = ["pbw", "monomial", "canonical"])]
        kind: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dimvector: String,
        #[arg(long, default_value = "default")]
        partition: String,
    },
    /// Base change matrix between two bases of one weight.
    Basechange {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        dimvector: String,
        #[arg(long, default_value = "default")]
        partition: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DesingCmd {
    /// Dimensions of the flag and incidence varieties of a flag type.
    Dims {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        monomial: String,
    },
    /// The fibre polynomial over a class, optionally with a direct count.
    Fibre {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long)]
        monomial: String,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Checks the fibres of the monomial desingularization of a class.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "default")]
        partition: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum HallCmd {
    /// The product of the indicator functions of two classes.
    Mult {
        #[command(flatten)]
        common: Common,
        /// Quotient class, then subrepresentation class.
        #[arg(long)]
        class: Vec<String>,
    },
    /// The Hall polynomial for middle term, quotient and subrepresentation.
    Number {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: Vec<String>,
    },
}

/// Class payload: `{"summands": [{"root": {"1": 1, "2": 1}, "mult": 1}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassJson {
    pub summands: Vec<SummandJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummandJson {
    pub root: BTreeMap<String, u32>,
    pub mult: u32,
}

/// Partition payload: a list of parts, each a list of roots.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionJson {
    pub parts: Vec<Vec<BTreeMap<String, u32>>>,
}

/// Inline JSON if the argument looks like JSON, else a file name.
fn payload<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

pub fn class_from_json(ar: &ArData, js: &ClassJson) -> Result<RepClass> {
    let q = ar.quiver();
    let mut m = RepClass::zero(ar);
    for s in &js.summands {
        let d = q.dimvector_from_map(&s.root)?;
        m.0[ar.root_index(&d)?] += s.mult;
    }
    Ok(m)
}

pub fn class_to_json(ar: &ArData, m: &RepClass) -> Value {
    let summands: Vec<Value> = m
        .summands()
        .map(|(a, k)| json!({"root": ar.quiver().dimvector_to_map(ar.root(a)), "mult": k}))
        .collect();
    json!({"summands": summands, "text": m.display(ar).to_string()})
}

fn parse_class(ar: &ArData, arg: &str) -> Result<RepClass> {
    class_from_json(ar, &payload::<ClassJson>(arg)?)
}

fn parse_partition(ar: &ArData, arg: &str) -> Result<DirectedPartition> {
    match arg {
        "default" => Ok(default_partition(ar)),
        "preset" => {
            let types = ar.quiver().types();
            match types.as_slice() {
                [DynkinType::A(_)] => an_partition(ar),
                [DynkinType::D(4)] => d4_partition(ar),
                _ => Err(Error::Usage("preset partitions exist for equioriented A_n and D_4 only".into())),
            }
        }
        _ => DirectedPartition::from_maps(ar, &payload::<PartitionJson>(arg)?.parts),
    }
}

fn parse_flag(q: &Quiver, arg: &str) -> Result<FlagType> {
    FlagType::from_json(&payload::<FlagTypeJson>(arg)?, q)
}

fn dim_json(q: &Quiver, d: &DimVector) -> Value {
    json!(q.dimvector_to_map(d))
}

fn poly_json(p: &CountPolynomial) -> Value {
    json!({"coeffs": p.coeffs(), "text": p.to_string()})
}

fn laurent_json(p: &LaurentPoly) -> Value {
    serde_json::to_value(p).expect("Laurent polynomials serialize")
}

fn matrix_json(ar: &ArData, m: &BaseChangeMatrix) -> Value {
    json!({
        "from": m.from,
        "to": m.to,
        "classes": m.classes.iter().map(|c| class_to_json(ar, c)).collect::<Vec<_>>(),
        "entries": m.entries.iter().map(|r| r.iter().map(laurent_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "at_one": m.at_one(),
    })
}

fn two_classes(ar: &ArData, args: &[String], n: usize) -> Result<Vec<RepClass>> {
    if args.len() != n {
        return Err(Error::Usage(format!("expected --class exactly {n} times, got {}", args.len())));
    }
    args.iter().map(|a| parse_class(ar, a)).collect()
}

fn setup(common: &Common) -> Result<Engine> {
    Engine::new(&Quiver::parse(&common.quiver)?)
}

/// Output of a command: JSON, or CSV lines when requested and available.
enum Output {
    Json(Value),
    Table(Vec<String>, Vec<Vec<String>>),
}

fn table(common: &Common, js: Value, header: &[&str], rows: Vec<Vec<String>>) -> Output {
    if common.csv {
        Output::Table(header.iter().map(|s| s.to_string()).collect(), rows)
    } else {
        Output::Json(js)
    }
}

fn no_csv(common: &Common, js: Value) -> Result<Output> {
    if common.csv {
        return Err(Error::Usage("CSV output is only available for roots, classes and hom".into()));
    }
    Ok(Output::Json(js))
}

fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Roots(c) => {
            let e = setup(c)?;
            let ar = e.ar();
            let q = ar.quiver();
            let roots: Vec<Value> = (0..ar.len())
                .map(|a| {
                    json!({"index": a, "dim": dim_json(q, ar.root(a)), "tau": ar.tau(a),
                           "projective": ar.is_projective(a), "injective": ar.is_injective(a)})
                })
                .collect();
            let rows = (0..ar.len()).map(|a| vec![a.to_string(), ar.root(a).to_string()]).collect();
            Ok(table(c, json!({"types": q.types().iter().map(|t| t.to_string()).collect::<Vec<_>>(), "roots": roots}), &["index", "root"], rows))
        }
        Command::Ar(c) => {
            let e = setup(c)?;
            let ar = e.ar();
            let q = ar.quiver();
            let vertices: Vec<Value> = (0..ar.len())
                .map(|a| json!({"index": a, "dim": dim_json(q, ar.root(a)), "position": ar.position(a), "tau": ar.tau(a)}))
                .collect();
            no_csv(c, json!({"vertices": vertices, "arrows": ar.ar_arrows()}))
        }
        Command::Hom { common, class } => {
            let e = setup(common)?;
            let ar = e.ar();
            if class.is_empty() {
                let n = ar.len();
                let hom: Vec<Vec<u32>> = (0..n).map(|a| (0..n).map(|b| ar.hom(a, b)).collect()).collect();
                let ext: Vec<Vec<u32>> = (0..n).map(|a| (0..n).map(|b| ar.ext(a, b)).collect()).collect();
                let mut rows = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        rows.push(vec![ar.root(a).to_string(), ar.root(b).to_string(), hom[a][b].to_string(), ext[a][b].to_string()]);
                    }
                }
                return Ok(table(common, json!({"hom": hom, "ext": ext}), &["from", "to", "hom", "ext"], rows));
            }
            let cs = two_classes(ar, class, 2)?;
            let (h, x) = hom_ext_classes(ar, &cs[0], &cs[1])?;
            let rows = vec![vec![h.to_string(), x.to_string()]];
            Ok(table(common, json!({"hom": h, "ext": x}), &["hom", "ext"], rows))
        }
        Command::Classes { common, dimvector } => {
            let e = setup(common)?;
            let ar = e.ar();
            let d = ar.quiver().parse_dimvector(dimvector)?;
            let t = e.table(&d)?;
            let mut list = Vec::new();
            let mut rows = Vec::new();
            for m in t.classes.iter() {
                let (end, orbit) = end_and_orbit_dim(ar, m);
                let mut js = class_to_json(ar, m);
                js["end"] = json!(end);
                js["orbit_dim"] = json!(orbit);
                list.push(js);
                rows.push(vec![m.display(ar).to_string(), end.to_string(), orbit.to_string()]);
            }
            Ok(table(common, json!({"dimvector": dim_json(ar.quiver(), &d), "classes": list}), &["class", "end", "orbit_dim"], rows))
        }
        Command::Degen { common, class } => {
            let e = setup(common)?;
            let ar = e.ar();
            let cs = two_classes(ar, class, 2)?;
            no_csv(common, json!({"degenerates": degenerates(ar, &cs[0], &cs[1])?}))
        }
        Command::Partition { common, partition } => {
            let e = setup(common)?;
            let ar = e.ar();
            let p = parse_partition(ar, partition)?;
            let violation = is_directed(ar, &p).map(|v| v.describe(ar));
            no_csv(common, json!({"parts": p.to_maps(ar), "directed": violation.is_none(), "violation": violation}))
        }
        Command::Monomial { common, class, partition } => {
            let e = setup(common)?;
            let ar = e.ar();
            let m = parse_class(ar, class)?;
            let p = parse_partition(ar, partition)?;
            let ft = monomial_of(ar, &p, ar.vertex_order(), &m);
            no_csv(common, serde_json::to_value(ft.to_json(ar.quiver())).expect("flag types serialize"))
        }
        Command::Desing { action } => match action {
            DesingCmd::Dims { common, monomial } => {
                let q = Quiver::parse(&common.quiver)?;
                let ft = parse_flag(&q, monomial)?;
                no_csv(common, serde_json::to_value(variety_dims(&q, &ft)).expect("dims serialize"))
            }
            DesingCmd::Fibre { common, class, monomial, prime } => {
                let e = setup(common)?;
                let ar = e.ar();
                let n = parse_class(ar, class)?;
                let ft = parse_flag(ar.quiver(), monomial)?;
                let poly = fibre_polynomial(&e, &n, &ft)?;
                let mut js = json!({"class": class_to_json(ar, &n), "fibre": poly_json(&poly)});
                if let Some(p) = prime {
                    let x = e.realize(&n, *p)?;
                    js["count"] = json!({"prime": p, "value": count_filtrations(ar.quiver(), &x, &ft)?.to_string()});
                }
                no_csv(common, js)
            }
            DesingCmd::Verify { common, class, partition } => {
                let e = setup(common)?;
                let ar = e.ar();
                let m = parse_class(ar, class)?;
                let p = parse_partition(ar, partition)?;
                let r = verify_desingularization(&e, &m, &p)?;
                let rows: Vec<Value> = r
                    .rows
                    .iter()
                    .map(|row| json!({"class": class_to_json(ar, &row.class), "degenerates": row.degenerates, "fibre": poly_json(&row.fibre)}))
                    .collect();
                no_csv(common, json!({"class": class_to_json(ar, &m), "flag_type": r.flag_type.to_json(ar.quiver()), "rows": rows, "passed": r.passed}))
            }
        },
        Command::Strata { common, class, monomial, dot } => {
            let e = setup(common)?;
            let ar = e.ar();
            let n = parse_class(ar, class)?;
            let ft = parse_flag(ar.quiver(), monomial)?;
            if *dot {
                return Ok(Output::Json(Value::String(gamma_dot(&e, &n, &ft)?)));
            }
            let paths = gamma_paths(&e, &n, &ft)?;
            let mut list = Vec::new();
            for path in &paths {
                let (orbital, fibre) = stratum_dims(ar, path, &ft)?;
                list.push(json!({
                    "classes": path.classes.iter().map(|c| class_to_json(ar, c)).collect::<Vec<_>>(),
                    "orbital_dim": orbital,
                    "fibre_dim": fibre,
                    "count": poly_json(&stratum_count(&e, path, &ft)?),
                }));
            }
            let cands = component_candidates(&e, &n, &ft)?;
            let cand_idx: Vec<usize> = cands.iter().filter_map(|c| paths.iter().position(|p| p == c)).collect();
            let fibre = list.iter().filter_map(|p| p["fibre_dim"].as_i64()).max();
            no_csv(common, json!({"paths": list, "fibre_dim": fibre, "component_candidates": cand_idx}))
        }
        Command::Special(c) => {
            let e = setup(c)?;
            let ar = e.ar();
            let s = is_special(ar)?;
            let labels: Vec<&str> = s.thick_sources.iter().map(|&v| ar.quiver().label(v)).collect();
            no_csv(c, json!({"special": s.special, "thick_sources": labels}))
        }
        Command::Hall { action } => match action {
            HallCmd::Mult { common, class } => {
                let e = setup(common)?;
                let ar = e.ar();
                let cs = two_classes(ar, class, 2)?;
                let prod = convolve(&e, &HallElement::indicator(&e, &cs[0]), &HallElement::indicator(&e, &cs[1]))?;
                let values: Vec<Value> = prod
                    .values
                    .iter()
                    .map(|(m, x)| json!({"class": class_to_json(ar, m), "value": laurent_json(x)}))
                    .collect();
                no_csv(common, json!({"weight": dim_json(ar.quiver(), &prod.weight), "values": values}))
            }
            HallCmd::Number { common, class } => {
                let e = setup(common)?;
                let ar = e.ar();
                let cs = two_classes(ar, class, 3)?;
                no_csv(common, json!({"hall": poly_json(&e.hall_number(&cs[0], &cs[1], &cs[2])?)}))
            }
        },
        Command::Basis { kind, common, dimvector, partition } => {
            let e = setup(common)?;
            let ar = e.ar();
            let d = ar.quiver().parse_dimvector(dimvector)?;
            let p = parse_partition(ar, partition)?;
            let m = match kind.as_str() {
                "pbw" => base_change(&e, &p, &d, Basis::Pbw, Basis::Pbw)?,
                "monomial" => monomial_to_pbw(&e, &p, &d)?,
                _ => canonical_basis(&e, &p, &d)?.zeta,
            };
            no_csv(common, matrix_json(ar, &m))
        }
        Command::Basechange { common, from, to, dimvector, partition } => {
            let e = setup(common)?;
            let ar = e.ar();
            let d = ar.quiver().parse_dimvector(dimvector)?;
            let p = parse_partition(ar, partition)?;
            let m = base_change(&e, &p, &d, from.parse()?, to.parse()?)?;
            no_csv(common, matrix_json(ar, &m))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs the command line and returns `(exit status, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match execute(&cli.command) {
        Ok(Output::Json(Value::String(s))) => (0, s, String::new()),
        Ok(Output::Json(v)) => (0, format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON output")), String::new()),
        Ok(Output::Table(header, rows)) => {
            let mut s = header.join(",") + "\n";
            for r in rows {
                s += &r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
                s.push('\n');
            }
            (0, s, String::new())
        }
        Err(err) => {
            let doc = json!({"error": {"code": err.code(), "message": err.to_string()}});
            let status = if matches!(err, Error::Usage(_)) { 2 } else { 1 };
            (status, format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON output")), err.to_string() + "\n")
        }
    }
}

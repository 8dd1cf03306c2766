//! Command-line front end for the `mckay` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::borel::{brute_force_count, BorelParametrization, StratumSummary, DEFAULT_BRUTE_FORCE_BOUND};
use crate::chartab::{dixon_schneider, CharacterTable};
use crate::error::{Error, Result};
use crate::lattice::CharacterIndex;
use crate::matgrp::{build_group, MatGroup, DEFAULT_MAX_GROUP_ORDER};
use crate::mckay::{self, EquivariantBijection, GroupSide, McKayReport, Verdict};
use crate::rootdata::{build_root_datum, is_prime, RootDatum, TypeLabel};

/// Environment variable overriding the group-order ceiling.
pub const MAX_ORDER_ENV: &str = "MCKAY_MAX_GROUP_ORDER";

/// Default ceiling on the number of conjugacy classes for character tables.
pub const DEFAULT_MAX_CLASSES: usize = 64;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mckay", version, about = "Character counts for split finite reductive groups and their Borel subgroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    CountBorel,
    Check,
    Table,
    Bijection,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Borel-side p′-character count by stratum, total and per central character.
    CountBorel(CommonArgs),
    /// Full comparison of group and Borel sides.
    Check(CommonArgs),
    /// Exact character table of the finite group.
    Table(CommonArgs),
    /// Certified equivariant bijection for every central character.
    Bijection(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Root system type, e.g. A1, C2, G2.
    #[arg(long = "type")]
    pub type_label: String,
    #[arg(short = 'p')]
    pub p: u64,
    #[arg(short = 'n', default_value_t = 1)]
    pub n: u32,
    /// trivial, nontrivial, or an index such as 1 or 1,0.
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long)]
    pub brute_force: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_order: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_CLASSES)]
    pub max_classes: usize,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
    pub brute_force_bound: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NuFilter {
    Trivial,
    Nontrivial,
    Index(CharacterIndex),
}

impl NuFilter {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Self::Trivial),
            "nontrivial" => Ok(Self::Nontrivial),
            _ => {
                let inner = s.trim_start_matches('(').trim_end_matches(')');
                let coords = inner
                    .split(',')
                    .filter(|c| !c.is_empty())
                    .map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad ν index `{s}`"))))
                    .collect::<Result<Vec<u64>>>()?;
                Ok(Self::Index(CharacterIndex(coords)))
            }
        }
    }

    pub fn accepts(&self, nu: &CharacterIndex) -> bool {
        match self {
            Self::Trivial => nu.is_trivial(),
            Self::Nontrivial => !nu.is_trivial(),
            Self::Index(i) => i == nu,
        }
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub type_label: TypeLabel,
    pub p: u64,
    pub n: u32,
    pub nu: Option<NuFilter>,
    pub brute_force: bool,
    pub brute_force_bound: u64,
    pub max_order: u64,
    pub max_classes: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// `env_max_order` is the value of [`MAX_ORDER_ENV`], if set; an
    /// explicit flag wins over it.
    pub fn from_cli(cli: Cli, env_max_order: Option<&str>) -> Result<Self> {
        let (command, a) = match cli.command {
            Command::CountBorel(a) => (CommandKind::CountBorel, a),
            Command::Check(a) => (CommandKind::Check, a),
            Command::Table(a) => (CommandKind::Table, a),
            Command::Bijection(a) => (CommandKind::Bijection, a),
        };
        let type_label: TypeLabel = a.type_label.parse()?;
        if !is_prime(a.p) {
            return Err(Error::InvalidInput(format!("p = {} is not prime", a.p)));
        }
        if a.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let env = env_max_order
            .map(|v| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("{MAX_ORDER_ENV}={v} is not an integer")))
            })
            .transpose()?;
        let max_order = a.max_order.or(env).unwrap_or(DEFAULT_MAX_GROUP_ORDER);
        if max_order == 0 || a.max_classes == 0 || a.brute_force_bound == 0 {
            return Err(Error::InvalidInput("bounds must be positive".into()));
        }
        Ok(Self {
            command,
            type_label,
            p: a.p,
            n: a.n,
            nu: a.nu.as_deref().map(NuFilter::parse).transpose()?,
            brute_force: a.brute_force,
            brute_force_bound: a.brute_force_bound,
            max_order,
            max_classes: a.max_classes,
            format: a.format,
            out: a.out,
        })
    }

    fn accepts(&self, nu: &CharacterIndex) -> bool {
        self.nu.as_ref().is_none_or(|f| f.accepts(nu))
    }
}

/// Rendered output and whether every verdict passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub pass: bool,
    /// Progress lines for standard error.
    pub log: Vec<String>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BoundExceeded { .. } => EXIT_BOUND,
        Error::UnsupportedType(_)
        | Error::ExcludedGroup { .. }
        | Error::Hypothesis(_)
        | Error::InvalidInput(_)
        | Error::NonPrimeCenter(_)
        | Error::Parse(_) => EXIT_UNSUPPORTED,
        _ => EXIT_FAIL,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct BruteForceSummary {
    total: u128,
    bound: u64,
    equal: bool,
}

#[derive(Serialize)]
struct CountReport {
    schema_version: u32,
    #[serde(rename = "type")]
    type_label: String,
    p: u64,
    n: u32,
    q: u64,
    strata: Vec<StratumSummary>,
    total: u128,
    center_order: u64,
    per_nu: BTreeMap<String, u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<BruteForceSummary>,
}

fn datum(cfg: &RunConfig) -> Result<RootDatum> {
    build_root_datum(cfg.type_label)
}

fn cmd_count_borel(cfg: &RunConfig) -> Result<Outcome> {
    let d = datum(cfg)?;
    let bp = BorelParametrization::new(&d, cfg.p, cfg.n)?;
    let mut per_nu = BTreeMap::new();
    for nu in bp.central_characters() {
        if cfg.accepts(&nu) {
            per_nu.insert(nu.to_string(), bp.per_nu_count(&nu)?);
        }
    }
    let total = bp.total();
    let brute_force = if cfg.brute_force {
        let r = brute_force_count(&d, &bp.frobenius(), cfg.brute_force_bound)?;
        Some(BruteForceSummary {
            total: r.total,
            bound: cfg.brute_force_bound,
            equal: r.total == total,
        })
    } else {
        None
    };
    let pass = brute_force.as_ref().is_none_or(|b| b.equal);
    let report = CountReport {
        schema_version: crate::SCHEMA_VERSION,
        type_label: d.label().to_string(),
        p: cfg.p,
        n: cfg.n,
        q: bp.q(),
        strata: bp.strata(),
        total,
        center_order: bp.center().order(),
        per_nu,
        brute_force,
    };
    let output = match cfg.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::new();
            let _ = writeln!(s, "# schema_version\t{}", report.schema_version);
            let _ = writeln!(s, "# type\t{}\tp\t{}\tn\t{}\tq\t{}", report.type_label, cfg.p, cfg.n, report.q);
            let _ = writeln!(s, "J\ti\ttorus_fixed\tcontribution");
            for st in &report.strata {
                let j: Vec<String> = st.subset.iter().map(|k| (k + 1).to_string()).collect();
                let _ = writeln!(s, "{{{}}}\t{}\t{}\t{}", j.join(","), st.i, st.torus_fixed, st.contribution);
            }
            let _ = writeln!(s, "total\t{total}");
            for (nu, c) in &report.per_nu {
                let _ = writeln!(s, "nu\t{nu}\t{c}");
            }
            if let Some(b) = &report.brute_force {
                let _ = writeln!(s, "brute_force\t{}\t{}", b.total, if b.equal { "equal" } else { "DIFFERENT" });
            }
            s
        }
    };
    Ok(Outcome {
        output,
        pass,
        log: Vec::new(),
    })
}

fn group(cfg: &RunConfig, d: &RootDatum) -> Result<(MatGroup, CharacterTable)> {
    let g = build_group(d, cfg.p, cfg.n, cfg.max_order)?;
    let k = g.classes().len();
    if k > cfg.max_classes {
        return Err(Error::BoundExceeded {
            what: "class count",
            value: k.to_string(),
            bound: cfg.max_classes.to_string(),
        });
    }
    let t = dixon_schneider(&g)?;
    Ok((g, t))
}

fn cmd_table(cfg: &RunConfig) -> Result<Outcome> {
    let d = datum(cfg)?;
    let (_, t) = group(cfg, &d)?;
    let log = vec![format!(
        "{} rows over {} classes; orthogonality and degree sum verified",
        t.len(),
        t.class_sizes().len()
    )];
    let output = match cfg.format {
        Format::Json => {
            let mut doc = t.document();
            doc.type_label = Some(d.label().to_string());
            doc.p = Some(cfg.p);
            doc.n = Some(cfg.n);
            to_json(&doc)
        }
        Format::Tsv => t.to_tsv(),
    };
    Ok(Outcome {
        output,
        pass: true,
        log,
    })
}

fn report_tsv(r: &McKayReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# schema_version\t{}", r.schema_version);
    let _ = writeln!(s, "# type\t{}\tp\t{}\tn\t{}\tq\t{}", r.datum.type_label, r.p, r.n, r.q);
    let _ = writeln!(s, "total\t{}\t{}", r.total.group, r.total.borel);
    let _ = writeln!(s, "nu\tG\tB\tN1\tNd\tN1p\tNdp");
    for (nu, c) in &r.per_nu {
        let cen = &r.census[nu];
        let _ = writeln!(s, "{nu}\t{}\t{}\t{}\t{}\t{}\t{}", c.group, c.borel, cen.n1, cen.nd, cen.n1p, cen.ndp);
    }
    for (j, per) in &r.fixed {
        for (nu, c) in per {
            let _ = writeln!(s, "fixed\t{j}\t{nu}\t{}\t{}\t{}\t{}", c.n1, c.nd, c.n1p, c.ndp);
        }
    }
    let _ = writeln!(s, "bijection_certified\t{}", r.bijection.certified);
    for f in &r.failures {
        let _ = writeln!(s, "failure\t{f}");
    }
    let _ = writeln!(s, "verdict\t{}", if r.verdict == Verdict::Pass { "pass" } else { "fail" });
    s
}

fn group_side(cfg: &RunConfig, d: &RootDatum) -> Result<GroupSide> {
    let (g, t) = group(cfg, d)?;
    GroupSide::from_parts(g, t)
}

fn cmd_check(cfg: &RunConfig) -> Result<Outcome> {
    let d = datum(cfg)?;
    mckay::check_with_group(&d, cfg.p, cfg.n, &group_side(cfg, &d)?).map(|r| Outcome {
        pass: r.verdict == Verdict::Pass,
        output: match cfg.format {
            Format::Json => to_json(&r),
            Format::Tsv => report_tsv(&r),
        },
        log: r.failures.clone(),
    })
}

#[derive(Serialize)]
struct BijectionReport {
    schema_version: u32,
    #[serde(rename = "type")]
    type_label: String,
    p: u64,
    n: u32,
    certified: bool,
    bijections: Vec<EquivariantBijection>,
}

fn cmd_bijection(cfg: &RunConfig) -> Result<Outcome> {
    let d = datum(cfg)?;
    let gs = group_side(cfg, &d)?;
    let bp = mckay::matched_parametrization(&d, cfg.p, cfg.n, &gs)?;
    let bijections: Vec<_> = mckay::bijections(&gs, &bp)?
        .into_iter()
        .filter(|b| cfg.accepts(&b.nu))
        .collect();
    let certified = bijections.iter().all(EquivariantBijection::certified);
    let report = BijectionReport {
        schema_version: crate::SCHEMA_VERSION,
        type_label: d.label().to_string(),
        p: cfg.p,
        n: cfg.n,
        certified,
        bijections,
    };
    let output = match cfg.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::new();
            let _ = writeln!(s, "# schema_version\t{}", report.schema_version);
            let _ = writeln!(s, "# type\t{}\tp\t{}\tn\t{}", report.type_label, cfg.p, cfg.n);
            let _ = writeln!(s, "nu\trow\td_orbit\tk_orbit\tJ\tz\tpsi");
            for b in &report.bijections {
                for pair in &b.pairs {
                    let g = &pair.group;
                    let l = &pair.borel;
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{}\t{}\t{:?}\t{:?}\t{:?}",
                        b.nu, g.row, g.d_orbit, g.k_orbit, l.subset, l.orbit, l.psi
                    );
                }
                let _ = writeln!(
                    s,
                    "certificate\t{}\tdelta\t{}\tgamma\tF_{}\t{}",
                    b.nu, b.delta_certificate, b.gamma_level, b.gamma_certificate
                );
            }
            s
        }
    };
    Ok(Outcome {
        output,
        pass: certified,
        log: Vec::new(),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::CountBorel => cmd_count_borel(cfg),
        CommandKind::Check => cmd_check(cfg),
        CommandKind::Table => cmd_table(cfg),
        CommandKind::Bijection => cmd_bijection(cfg),
    }
}

/// Parses arguments, runs, writes output and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_UNSUPPORTED } else { EXIT_PASS };
        }
    };
    let env = std::env::var(MAX_ORDER_ENV).ok();
    let outcome = RunConfig::from_cli(cli, env.as_deref()).and_then(|cfg| {
        let o = run(&cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &o.output)
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{}", o.output),
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            for line in &o.log {
                eprintln!("{line}");
            }
            if o.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

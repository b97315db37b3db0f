//! Run configuration, the verification commands and their rendering.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bc::{galois_check, gibbs_check, kms_check, partition_function, Beta, KMS_CLAIM};
use crate::error::{Error, Result};
use crate::guard::Guardrails;
use crate::induction::{
    divergence_witness, induce_restrict_roundtrip, induced_partition, zeta_partial, NumberFieldSpec, WindowMeasure,
};
use crate::ktheory::{ktheory_report, KTHEORY_CLAIM};
use crate::level::{LevelIndex, LevelMeasure, LevelModel};
use crate::padic::LocalFieldSpec;
use crate::prim::{prim_report, PRIM_CLAIM};

pub const LEVELS_CLAIM: &str =
    "Y_{n,m} = disjoint union over 0 <= k <= m of G_{n,m-k}; sum_k |G_{n,m-k}| = |Y_{n,m}| = n q^m";
pub const INDUCE_CLAIM: &str =
    "Phi(1) = zeta_K(beta)(1 - p^{-f beta}) for beta > 1, Phi(1) = +inf for beta <= 1; mu~(Z n gY) = N(g)^-beta mu(g^-1 Z n Y)";

/// Names accepted as config sections and subcommands.
pub const COMMANDS: [&str; 6] = ["levels", "kms", "ktheory", "prim", "induce", "all"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub field: String,
    pub levels: Vec<LevelIndex>,
    pub betas: Vec<Beta>,
    /// Matrix-model truncation `N`.
    pub truncation: usize,
    /// Valuation window; defaults to `m + 2` per level.
    pub window: Option<u32>,
    pub global: String,
    pub prime: u64,
    /// Dirichlet series bound `B`.
    pub bound: u64,
    /// Divergence target for `beta <= 1`.
    pub target: f64,
    pub guard: Guardrails,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: "Q2".into(),
            levels: vec![LevelIndex::new(1, 1), LevelIndex::new(2, 2)],
            betas: vec![Beta::Real(0.5), Beta::Int(1), Beta::Int(2)],
            truncation: 16,
            window: None,
            global: "Q(i)".into(),
            prime: 5,
            bound: 100_000,
            target: 10.0,
            guard: Guardrails::default(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}

/// A number or a string in a list of inverse temperatures.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum BetaValue {
    Num(f64),
    Str(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigPatch {
    field: Option<String>,
    levels: Option<Vec<String>>,
    beta: Option<Vec<BetaValue>>,
    #[serde(rename = "N")]
    truncation: Option<usize>,
    window: Option<u32>,
    global: Option<String>,
    p: Option<u64>,
    #[serde(rename = "B")]
    bound: Option<u64>,
    target: Option<f64>,
    guard: Option<Guardrails>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

/// Parses `n:m[,n:m...]`.
pub fn parse_levels(s: &str) -> Result<Vec<LevelIndex>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Parses a comma-separated list of positive reals or `inf`.
pub fn parse_betas(s: &str) -> Result<Vec<Beta>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
}

impl RunConfig {
    /// Reads top-level keys, then the `[command]` section, over the defaults.
    ///
    /// A top-level `levels` array and a `[levels]` section cannot coexist in
    /// one TOML document; put the level list inside the section in that case.
    pub fn from_toml(text: &str, command: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
        let section = match table.get(command) {
            Some(toml::Value::Table(_)) => table.remove(command),
            _ => None,
        };
        table.retain(|k, v| !(COMMANDS.contains(&AsRef::<str>::as_ref(k)) && v.is_table()));
        let mut cfg = RunConfig::default();
        cfg.apply(table)?;
        if let Some(toml::Value::Table(t)) = section {
            cfg.apply(t)?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, table: toml::Table) -> Result<()> {
        let patch: ConfigPatch =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Parse(e.message().to_string()))?;
        if let Some(v) = patch.field {
            self.field = v;
        }
        if let Some(v) = patch.levels {
            self.levels = parse_levels(&v.join(","))?;
        }
        if let Some(v) = patch.beta {
            self.betas = v
                .into_iter()
                .map(|b| match b {
                    BetaValue::Num(x) => Beta::new(x),
                    BetaValue::Str(s) => s.parse(),
                })
                .collect::<Result<_>>()?;
        }
        if let Some(v) = patch.truncation {
            self.truncation = v;
        }
        if let Some(v) = patch.window {
            self.window = Some(v);
        }
        if let Some(v) = patch.global {
            self.global = v;
        }
        if let Some(v) = patch.p {
            self.prime = v;
        }
        if let Some(v) = patch.bound {
            self.bound = v;
        }
        if let Some(v) = patch.target {
            self.target = v;
        }
        if let Some(v) = patch.guard {
            self.guard = v;
        }
        if let Some(v) = patch.format {
            self.format = v;
        }
        if let Some(v) = patch.out {
            self.out = Some(v);
        }
        Ok(())
    }
}

/// A validated configuration with its level models built.
#[derive(Debug, Clone)]
pub struct Session {
    pub config: RunConfig,
    pub field: LocalFieldSpec,
    pub models: Vec<LevelModel>,
    pub global: NumberFieldSpec,
}

impl Session {
    /// Checks every value against the guardrails before any computation.
    pub fn new(config: RunConfig) -> Result<Self> {
        let field: LocalFieldSpec = config.field.parse()?;
        if config.levels.is_empty() {
            return Err(Error::Parse("empty level list".into()));
        }
        if config.betas.is_empty() {
            return Err(Error::Parse("empty beta list".into()));
        }
        if config.truncation == 0 {
            return Err(Error::Parse("truncation N must be at least 1".into()));
        }
        if config.bound == 0 {
            return Err(Error::Parse("bound B must be at least 1".into()));
        }
        let g = &config.guard;
        g.check("q", field.q(), g.max_q)?;
        let mut models = Vec::with_capacity(config.levels.len());
        for &level in &config.levels {
            g.check("n", level.n as u64, g.max_n as u64)?;
            g.check("m", level.m as u64, g.max_m as u64)?;
            models.push(LevelModel::with_guard(&field, level, g)?);
        }
        let global = config.global.parse()?;
        Ok(Session { config, field, models, global })
    }

    fn window(&self, model: &LevelModel) -> u32 {
        self.config.window.unwrap_or(model.m() + 2)
    }
}

/// Rows for CSV and markdown output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> =
                row.iter().map(|c| if c.contains(',') { format!("\"{c}\"") } else { c.clone() }).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n|", self.headers.join(" | "));
        out.push_str(&"---|".repeat(self.headers.len()));
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }
}

/// Outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub claim: String,
    pub pass: bool,
    pub results: Value,
    #[serde(skip)]
    pub table: Table,
    /// Extra markdown blocks such as specialization tables.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.table.to_csv(),
            OutputFormat::Markdown => {
                let mut out = format!("## {}\n\n`{}`\n\n{}", self.command, self.claim, self.table.to_markdown());
                for note in &self.notes {
                    out.push('\n');
                    out.push_str(note);
                }
                let _ = writeln!(out, "\n**{}**", if self.pass { "PASS" } else { "FAIL" });
                out
            }
        }
    }
}

/// The combined output of `all`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bundle {
    pub command: &'static str,
    pub pass: bool,
    pub reports: Vec<Report>,
}

impl Bundle {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.reports.iter().map(|r| format!("# {}\n{}", r.command, r.table.to_csv())).collect(),
            OutputFormat::Markdown => self.reports.iter().map(|r| r.render(format)).collect::<Vec<_>>().join("\n"),
        }
    }
}

fn report(command: &str, claim: &str, pass: bool, results: Value, table: Table) -> Report {
    Report { command: command.into(), claim: claim.into(), pass, results, table, notes: Vec::new() }
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

pub fn cmd_levels(session: &Session) -> Result<Report> {
    let mut table = Table::new(&["level", "total", "expected_total", "dimension_sum", "strata", "balancing", "pass"]);
    let mut results = Vec::new();
    let mut pass = true;
    for model in &session.models {
        let m = model.m();
        let strata = model.orbit_decompose()?;
        let closed_form: Vec<(u32, u64)> = (0..=m).map(|k| (k, model.group_order(m - k))).collect();
        let total: u64 = strata.iter().map(|s| s.1).sum();
        let expected_total = model.point_count() as u64;
        let dimension_sum = model.stratum_dimension_sum();
        let balancing = model.balancing_free_check()?;
        let conjugacy = model.shift_conjugacy_check(session.window(model))?;
        let ok = strata == closed_form
            && total == expected_total
            && dimension_sum == expected_total
            && balancing.pass
            && conjugacy.pass;
        pass &= ok;
        let strata_str = strata.iter().map(|(k, s)| format!("{k}:{s}")).collect::<Vec<_>>().join(" ");
        table.push(vec![
            model.level().to_string(),
            total.to_string(),
            expected_total.to_string(),
            dimension_sum.to_string(),
            strata_str,
            if balancing.pass { "free" } else { "not free" }.into(),
            ok.to_string(),
        ]);
        results.push(json!({
            "level": model.level(),
            "strata": strata,
            "closed_form": closed_form,
            "total": total,
            "expected_total": expected_total,
            "dimension_sum": dimension_sum,
            "balancing": balancing,
            "conjugacy": conjugacy,
            "pass": ok,
        }));
    }
    Ok(report("levels", LEVELS_CLAIM, pass, json!({ "field": session.field.to_string(), "levels": results }), table))
}

/// Largest total degree of monomial pairs checked by `kms`.
pub const KMS_MAX_DEGREE: u32 = 3;

pub fn cmd_kms(session: &Session) -> Result<Report> {
    let n = session.config.truncation;
    let q = session.field.q();
    let mut table = Table::new(&["beta", "truncated_Z", "exact_Z", "bound", "max_kms_residual"]);
    let mut sweep = Vec::new();
    let mut pass = true;
    for beta in &session.config.betas {
        if beta.is_infinite() {
            let mut evaluations = Vec::new();
            for model in &session.models {
                let ok = gibbs_check(model, beta, n)?;
                pass &= ok.pass;
                evaluations.push(ok);
            }
            table.push(vec!["inf".into(), "1".into(), "1".into(), "0".into(), "0".into()]);
            sweep.push(json!({ "beta": beta, "kms_infty": evaluations }));
            continue;
        }
        let z = partition_function::<f64>(q, beta, n)?;
        let z_ok = ((z.exact - z.truncated) - z.bound).abs() <= 1e-12 * z.exact;
        let mut kms = Vec::new();
        let mut gibbs = Vec::new();
        let mut max_residual = 0.0f64;
        for model in &session.models {
            let k = kms_check(model, beta, n, KMS_MAX_DEGREE)?;
            let g = gibbs_check(model, beta, n)?;
            max_residual = max_residual.max(k.max_residual);
            pass &= k.pass && g.pass;
            kms.push(k);
            gibbs.push(g);
        }
        pass &= z_ok;
        table.push(vec![beta.to_string(), num(z.truncated), num(z.exact), num(z.bound), num(max_residual)]);
        sweep.push(json!({
            "beta": beta,
            "partition": { "truncated": z.truncated, "exact": z.exact, "bound": z.bound, "pass": z_ok },
            "kms": kms,
            "gibbs": gibbs,
        }));
    }
    let beta0 = session.config.betas[0];
    let mut galois = Vec::new();
    for model in &session.models {
        let g = galois_check(model, &beta0)?;
        pass &= g.pass;
        galois.push(g);
    }
    let results = json!({
        "field": session.field.to_string(),
        "q": q,
        "truncation": n,
        "max_degree": KMS_MAX_DEGREE,
        "sweep": sweep,
        "galois": galois,
    });
    Ok(report("kms", KMS_CLAIM, pass, results, table))
}

pub fn cmd_ktheory(session: &Session) -> Result<Report> {
    let mut table = Table::new(&["level", "rank", "torsion", "k1_kernel_rank", "stabilized", "pass"]);
    let mut results = Vec::new();
    let mut pass = true;
    for model in &session.models {
        let r = ktheory_report(model, session.config.window)?;
        pass &= r.pass;
        table.push(vec![
            r.level.to_string(),
            r.rank.to_string(),
            if r.torsion.is_empty() { "none".into() } else { r.torsion.join(" ") },
            r.k1_kernel_rank.to_string(),
            r.stabilized.to_string(),
            r.pass.to_string(),
        ]);
        results.push(r);
    }
    Ok(report("ktheory", KTHEORY_CLAIM, pass, json!({ "field": session.field.to_string(), "levels": results }), table))
}

pub fn cmd_prim(session: &Session) -> Result<Report> {
    let mut table = Table::new(&["level", "labels", "expected", "units_separated", "zero_in_every_closure", "pass"]);
    let mut results = Vec::new();
    let mut notes = Vec::new();
    let mut pass = true;
    for model in &session.models {
        let t = prim_report(model)?;
        pass &= t.pass;
        table.push(vec![
            t.level.to_string(),
            t.label_count.to_string(),
            t.expected_label_count.to_string(),
            t.units_separated.to_string(),
            t.zero_in_every_closure.to_string(),
            t.pass.to_string(),
        ]);
        notes.push(format!("### level {}\n\n{}", t.level, t.to_markdown()));
        results.push(t);
    }
    let mut r = report("prim", PRIM_CLAIM, pass, json!({ "field": session.field.to_string(), "levels": results }), table);
    r.notes = notes;
    Ok(r)
}

pub fn cmd_induce(session: &Session) -> Result<Report> {
    let cfg = &session.config;
    let k = &session.global;
    let mut table = Table::new(&["beta", "partial", "tail_bound", "induced_mass"]);
    let mut scalars = Vec::new();
    let mut pass = true;
    for beta in &cfg.betas {
        match *beta {
            Beta::Infinite => {
                table.push(vec!["inf".into(), "1".into(), "0".into(), "1".into()]);
                scalars.push(json!({ "beta": beta, "partial": 1.0, "tail_bound": 0.0, "induced_mass": 1.0 }));
            }
            b if b.as_f64() > 1.0 => {
                let r = induced_partition(k, cfg.prime, b.as_f64(), cfg.bound)?;
                pass &= r.mass.is_finite() && r.mass > 0.0;
                table.push(vec![beta.to_string(), num(r.zeta.partial), num(r.zeta.tail_bound), num(r.mass)]);
                scalars.push(json!({ "beta": beta, "result": r }));
            }
            b => {
                let witness = divergence_witness(k, b.as_f64(), cfg.target)?;
                let z = zeta_partial(k, b.as_f64(), witness)?;
                pass &= z.partial > cfg.target;
                table.push(vec![beta.to_string(), num(z.partial), "inf".into(), "inf".into()]);
                scalars.push(json!({
                    "beta": beta,
                    "divergence": { "target": cfg.target, "witness_bound": witness, "partial": z.partial },
                }));
            }
        }
    }
    let beta_exact = cfg.betas.iter().copied().find(|b| matches!(b, Beta::Int(_))).unwrap_or(Beta::Int(1));
    let mut roundtrips = Vec::new();
    for model in &session.models {
        let window = session.window(model);
        let measures = [
            ("dirac", LevelMeasure::dirac(model, &model.identity(model.m()))?),
            ("uniform", LevelMeasure::uniform(model)),
        ];
        for (name, nu) in measures {
            let nu = WindowMeasure::from_level_measure(model, &nu, window, beta_exact)?;
            let r = induce_restrict_roundtrip(model, &nu)?;
            pass &= r.pass;
            roundtrips.push(json!({ "measure": name, "report": r }));
        }
    }
    let results = json!({
        "global": k,
        "p": cfg.prime,
        "bound": cfg.bound,
        "local_field": session.field.to_string(),
        "scalars": scalars,
        "roundtrip_beta": beta_exact,
        "roundtrips": roundtrips,
    });
    Ok(report("induce", INDUCE_CLAIM, pass, results, table))
}

pub fn cmd_all(session: &Session) -> Result<Bundle> {
    let reports = vec![
        cmd_levels(session)?,
        cmd_kms(session)?,
        cmd_ktheory(session)?,
        cmd_prim(session)?,
        cmd_induce(session)?,
    ];
    Ok(Bundle { command: "all", pass: reports.iter().all(|r| r.pass), reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(field: &str, levels: &str) -> Session {
        let cfg = RunConfig { field: field.into(), levels: parse_levels(levels).unwrap(), ..RunConfig::default() };
        Session::new(cfg).unwrap()
    }

    #[test]
    fn levels_totals() {
        let r = cmd_levels(&session("Q3", "2:2")).unwrap();
        assert!(r.pass);
        assert_eq!(r.table.rows[0][1], "18");
        let r = cmd_levels(&session("Q2", "1:1")).unwrap();
        assert_eq!(r.table.rows[0][1], "2");
    }

    #[test]
    fn empty_levels_rejected() {
        let cfg = RunConfig { levels: vec![], ..RunConfig::default() };
        assert!(matches!(Session::new(cfg), Err(Error::Parse(_))));
    }

    #[test]
    fn toml_sections_override_top_level() {
        let text = "field = \"Q3\"\nlevels = [\"2:1\"]\n[kms]\nbeta = [1, \"inf\"]\nN = 8\n[guard]\nmax_n = 4\n";
        let cfg = RunConfig::from_toml(text, "kms").unwrap();
        assert_eq!(cfg.field, "Q3");
        assert_eq!(cfg.betas, vec![Beta::Int(1), Beta::Infinite]);
        assert_eq!((cfg.truncation, cfg.guard.max_n), (8, 4));
        let other = RunConfig::from_toml(text, "prim").unwrap();
        let nested = RunConfig::from_toml("field = \"Q5\"\n[levels]\nlevels = [\"3:1\"]\n", "levels").unwrap();
        assert_eq!((nested.field.as_str(), nested.levels[0]), ("Q5", LevelIndex::new(3, 1)));
        assert_eq!(other.truncation, 16);
        assert!(RunConfig::from_toml("bogus = 1", "kms").is_err());
    }

    #[test]
    fn kms_q2() {
        let mut cfg = RunConfig { levels: parse_levels("1:1").unwrap(), ..RunConfig::default() };
        cfg.betas = vec![Beta::Int(1)];
        let r = cmd_kms(&Session::new(cfg).unwrap()).unwrap();
        assert!(r.pass);
        assert_eq!(r.table.rows[0][2], "2");
    }

    #[test]
    fn ktheory_and_prim_q3() {
        let s = session("Q3", "2:1");
        let k = cmd_ktheory(&s).unwrap();
        assert_eq!((k.table.rows[0][1].as_str(), k.table.rows[0][2].as_str()), ("3", "none"));
        let p = cmd_prim(&s).unwrap();
        assert_eq!(p.table.rows[0][1], "5");
    }

    #[test]
    fn induce_gaussian() {
        let mut cfg = RunConfig { levels: parse_levels("1:1").unwrap(), ..RunConfig::default() };
        cfg.betas = vec![Beta::Int(2)];
        let r = cmd_induce(&Session::new(cfg).unwrap()).unwrap();
        assert!(r.pass);
        let mass: f64 = r.table.rows[0][3].parse().unwrap();
        assert!((mass - 1.44643).abs() < 1e-3);
    }
}

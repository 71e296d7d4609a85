//! End-to-end commands: train, evaluate, optimize, compare and trace.
//!
//! Every command is a plain function that writes its artifacts and returns a
//! report; the binary is a thin argument parser over these. Each output file
//! starts with one `#` comment row carrying the seed and the case config hash.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::agent::{train, write_training_log, AgentConfig, EpisodeLog, GreedyPolicy};
use crate::baselines::{optimize_baseline, write_surface_csv, BaselineKind, BaselineSpec, GridSpec, Optimized};
use crate::cases::CaseConfig;
use crate::env::{write_trace_csv, EnvRng, Observation, Policy, StepOutcome};
use crate::error::{Error, Result};
use crate::eval::{monte_carlo, summarize, summary_row, write_results_csv, RunStatistics, Summary, SUMMARY_HEADER};
use crate::nn::{Mlp, TrainingMetadata};
use crate::rng::{domain, RngStream};

/// Provenance written into the comment row of every output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunMeta {
    pub command: &'static str,
    pub seed: u64,
    pub config_hash: String,
    pub case_id: String,
}

impl RunMeta {
    pub fn new(command: &'static str, case: &CaseConfig, seed: u64) -> Self {
        Self { command, seed, config_hash: case.config_hash(), case_id: case.id.clone() }
    }

    /// `seed=… config_hash=… command=… case=…`, without the leading `#`.
    pub fn line(&self) -> String {
        format!("seed={} config_hash={} command={} case={}", self.seed, self.config_hash, self.command, self.case_id)
    }
}

/// Where a policy comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum PolicySource {
    Model(PathBuf),
    Baseline(BaselineSpec),
}

impl PolicySource {
    /// `fr`, a path to a saved baseline spec (`.json` holding a `kind` tag),
    /// or a path to a trained model.
    pub fn parse(arg: &str) -> Result<Self> {
        if arg.eq_ignore_ascii_case("fr") {
            return Ok(PolicySource::Baseline(BaselineSpec::Fr));
        }
        let path = PathBuf::from(arg);
        let text = read_artifact(&path, "pass `fr`, a baseline spec written by `optimize`, or a model written by `train`")?;
        if text.contains("\"format\"") {
            Ok(PolicySource::Model(path))
        } else {
            BaselineSpec::from_json(&text).map(PolicySource::Baseline).map_err(|e| Error::Parse {
                path: path.clone(),
                message: e.to_string(),
            })
        }
    }

    pub fn load(&self, case: &CaseConfig) -> Result<LoadedPolicy> {
        match self {
            PolicySource::Model(path) => {
                let (net, metadata) = Mlp::load(path)?;
                Ok(LoadedPolicy::Agent { policy: GreedyPolicy::new(net, case.failure_threshold), metadata })
            }
            PolicySource::Baseline(spec) => {
                spec.validate(case.failure_threshold)?;
                Ok(LoadedPolicy::Baseline(*spec))
            }
        }
    }
}

pub enum LoadedPolicy {
    Agent { policy: GreedyPolicy, metadata: TrainingMetadata },
    Baseline(BaselineSpec),
}

impl LoadedPolicy {
    pub fn label(&self) -> String {
        match self {
            LoadedPolicy::Agent { .. } => "rl".into(),
            LoadedPolicy::Baseline(spec) => spec.kind().name().into(),
        }
    }

    /// A note when a model was trained on a different case than `case`.
    pub fn case_warning(&self, case: &CaseConfig) -> Option<String> {
        match self {
            LoadedPolicy::Agent { metadata, .. }
                if metadata.case_id != case.id || metadata.config_hash != case.config_hash() =>
            {
                Some(format!(
                    "model was trained on case {} (config {}), evaluating on case {} (config {})",
                    metadata.case_id,
                    metadata.config_hash,
                    case.id,
                    case.config_hash()
                ))
            }
            _ => None,
        }
    }
}

impl Policy for LoadedPolicy {
    fn decide(&self, obs: &Observation) -> crate::env::Action {
        match self {
            LoadedPolicy::Agent { policy, .. } => policy.decide(obs),
            LoadedPolicy::Baseline(spec) => spec.decide(obs),
        }
    }
}

/// Monte Carlo size shared by evaluate, optimize and compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McSettings {
    pub iterations: usize,
    pub horizon: usize,
    pub seed: u64,
}

impl McSettings {
    pub fn for_case(case: &CaseConfig, seed: u64) -> Self {
        Self { iterations: case.iterations, horizon: case.horizon, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.iterations < 2 {
            return Err(Error::Validation("at least 2 iterations are needed for a confidence interval".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Validation("horizon must be positive".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- train

#[derive(Debug)]
pub struct TrainReport {
    pub model_path: PathBuf,
    pub log_path: PathBuf,
    pub net: Mlp,
    pub metadata: TrainingMetadata,
    pub last_episode: EpisodeLog,
}

/// Training-log location for a model file: `m2.model` → `m2.log.csv`.
pub fn training_log_path(model: &Path) -> PathBuf {
    model.with_extension("log.csv")
}

pub fn cmd_train(
    case: &CaseConfig,
    cfg: &AgentConfig,
    out: &Path,
    on_episode: impl FnMut(&EpisodeLog),
) -> Result<TrainReport> {
    ensure_parent(out)?;
    let trained = train(case, cfg, on_episode)?;
    let meta = RunMeta::new("train", case, cfg.seed);
    trained.net.save(out, &trained.metadata)?;
    let log_path = training_log_path(out);
    write_file(&log_path, |w| write_training_log(w, &trained.log, Some(&meta.line())))?;
    Ok(TrainReport {
        model_path: out.to_path_buf(),
        log_path,
        last_episode: *trained.log.last().expect("at least one episode"),
        net: trained.net,
        metadata: trained.metadata,
    })
}

// ---------------------------------------------------------------- evaluate

#[derive(Debug)]
pub struct EvaluateReport {
    pub policy: String,
    pub summary: Summary,
    pub stats: Vec<RunStatistics>,
    pub warnings: Vec<String>,
    pub results_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Runs the Monte Carlo protocol for one policy and writes
/// `<out>/<policy>_results.csv` and `<out>/<policy>_summary.csv`.
pub fn cmd_evaluate(case: &CaseConfig, source: &PolicySource, mc: McSettings, out: &Path) -> Result<EvaluateReport> {
    mc.validate()?;
    let policy = source.load(case)?;
    let warnings: Vec<String> = policy.case_warning(case).into_iter().collect();
    let env = case.env()?;
    let stats = monte_carlo(&policy, &env, mc.iterations, mc.horizon, mc.seed)?;
    let costs = case.costs();
    let summary = summarize(&stats, &costs)?;
    let label = policy.label();
    let meta = RunMeta::new("evaluate", case, mc.seed).line();

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let results_path = out.join(format!("{label}_results.csv"));
    write_file(&results_path, |w| write_results_csv(w, &stats, &costs, Some(&meta)))?;
    let summary_path = out.join(format!("{label}_summary.csv"));
    write_file(&summary_path, |w| {
        writeln!(w, "# {meta}")?;
        writeln!(w, "{SUMMARY_HEADER}")?;
        writeln!(w, "{}", summary_row(&case.id, &label, &summary, &costs))
    })?;
    Ok(EvaluateReport { policy: label, summary, stats, warnings, results_path, summary_path })
}

// ---------------------------------------------------------------- optimize

#[derive(Debug)]
pub struct OptimizeReport {
    pub optimized: Optimized,
    pub surface_path: PathBuf,
    pub best_path: PathBuf,
}

/// Path of the best spec written by `optimize` for `kind`.
pub fn best_spec_path(dir: &Path, kind: BaselineKind) -> PathBuf {
    dir.join(format!("{}_best.json", kind.name()))
}

/// Grid search for `kind`, writing `<out>/<kind>_surface.csv` and
/// `<out>/<kind>_best.json`. For ATBM, any TBM and Age optima already in
/// `out` are added to the grid so the four-parameter family contains them.
pub fn cmd_optimize(
    kind: BaselineKind,
    case: &CaseConfig,
    grid: Option<GridSpec>,
    mc: McSettings,
    out: &Path,
) -> Result<OptimizeReport> {
    mc.validate()?;
    let mut grid = grid.unwrap_or_else(|| GridSpec::default_for(kind, case.failure_threshold));
    if kind == BaselineKind::Atbm {
        for sub in [BaselineKind::Tbm, BaselineKind::Age] {
            let path = best_spec_path(out, sub);
            if path.exists() {
                grid.include(&load_spec(&path)?);
            }
        }
    }
    let optimized = optimize_baseline(kind, case, &grid, mc.iterations, mc.horizon, mc.seed)?;
    let meta = RunMeta::new("optimize", case, mc.seed).line();
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let surface_path = out.join(format!("{}_surface.csv", kind.name()));
    write_file(&surface_path, |w| write_surface_csv(w, &optimized.surface, Some(&meta)))?;
    let best_path = best_spec_path(out, kind);
    write_file(&best_path, |w| writeln!(w, "{}", optimized.best.spec.to_json()))?;
    Ok(OptimizeReport { optimized, surface_path, best_path })
}

pub fn load_spec(path: &Path) -> Result<BaselineSpec> {
    let text = read_artifact(path, "run `optimize` for this baseline first")?;
    BaselineSpec::from_json(&text).map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
}

// ---------------------------------------------------------------- compare

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub policy: String,
    pub spec: Option<BaselineSpec>,
    pub summary: Summary,
    /// `100·(C_policy − C_rl)/C_policy` on mean cost per inspection.
    pub rl_reduction_percent: f64,
}

#[derive(Debug)]
pub struct CompareReport {
    pub rows: Vec<ComparisonRow>,
    pub warnings: Vec<String>,
    pub costs_path: PathBuf,
    pub reductions_path: PathBuf,
}

impl CompareReport {
    pub fn row(&self, policy: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.policy == policy)
    }
}

pub const COMPARISON_HEADER: &str = "iteration,policy,total_cost,cost_per_inspection,N_P,N_PR,N_CR";
pub const REDUCTION_HEADER: &str =
    "policy,spec,cost_per_inspection,ci_lo,ci_hi,EC_mean,N_P_mean,N_PR_mean,N_CR_mean,rl_reduction_percent";

/// Evaluates the trained agent and FR, TBM, Age and ATBM (optima read from
/// `specs_dir`) on the same iteration streams. Writes per-iteration costs to
/// `<out>/comparison.csv` and the reduction table to `<out>/reductions.csv`.
pub fn cmd_compare(case: &CaseConfig, model: &Path, specs_dir: &Path, mc: McSettings, out: &Path) -> Result<CompareReport> {
    mc.validate()?;
    if !model.exists() {
        return Err(Error::MissingArtifact {
            path: model.to_path_buf(),
            hint: "run `train` to produce a model first".into(),
        });
    }
    let mut sources = vec![("rl".to_string(), PolicySource::Model(model.to_path_buf())), ("fr".into(), PolicySource::Baseline(BaselineSpec::Fr))];
    for kind in [BaselineKind::Tbm, BaselineKind::Age, BaselineKind::Atbm] {
        let path = best_spec_path(specs_dir, kind);
        if !path.exists() {
            return Err(Error::MissingArtifact {
                path,
                hint: format!("run `optimize --baseline {}` with the same --out directory first", kind.name()),
            });
        }
        sources.push((kind.name().to_string(), PolicySource::Baseline(load_spec(&path)?)));
    }

    let env = case.env()?;
    let costs = case.costs();
    let mut warnings = Vec::new();
    let mut evaluated = Vec::new();
    for (label, source) in &sources {
        let policy = source.load(case)?;
        warnings.extend(policy.case_warning(case));
        let stats = monte_carlo(&policy, &env, mc.iterations, mc.horizon, mc.seed)?;
        let summary = summarize(&stats, &costs)?;
        let spec = match source {
            PolicySource::Baseline(s) => Some(*s),
            PolicySource::Model(_) => None,
        };
        evaluated.push((label.clone(), spec, stats, summary));
    }
    let rl_cost = evaluated[0].3.cost_per_inspection.mean;
    let rows: Vec<ComparisonRow> = evaluated
        .iter()
        .map(|(label, spec, _, summary)| ComparisonRow {
            policy: label.clone(),
            spec: *spec,
            summary: summary.clone(),
            rl_reduction_percent: reduction_percent(summary.cost_per_inspection.mean, rl_cost),
        })
        .collect();

    let meta = RunMeta::new("compare", case, mc.seed).line();
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let costs_path = out.join("comparison.csv");
    write_file(&costs_path, |w| {
        writeln!(w, "# {meta}")?;
        writeln!(w, "{COMPARISON_HEADER}")?;
        for (label, _, stats, _) in &evaluated {
            for (i, s) in stats.iter().enumerate() {
                writeln!(
                    w,
                    "{i},{label},{},{},{},{},{}",
                    s.total_cost,
                    s.cost_per_inspection(),
                    s.n_repairs,
                    s.n_preventive_replacements,
                    s.n_corrective_replacements
                )?;
            }
        }
        Ok(())
    })?;
    let reductions_path = out.join("reductions.csv");
    write_file(&reductions_path, |w| {
        writeln!(w, "# {meta}")?;
        writeln!(w, "{REDUCTION_HEADER}")?;
        for r in &rows {
            let s = &r.summary;
            writeln!(
                w,
                "{},\"{}\",{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.2}",
                r.policy,
                r.spec.map_or_else(|| "trained agent".to_string(), |s| s.describe()),
                s.cost_per_inspection.mean,
                s.cost_per_inspection.lower,
                s.cost_per_inspection.upper,
                s.cycle_cost_rate.mean,
                s.repairs.mean,
                s.preventive_replacements.mean,
                s.corrective_replacements.mean,
                r.rl_reduction_percent
            )?;
        }
        Ok(())
    })?;
    Ok(CompareReport { rows, warnings, costs_path, reductions_path })
}

/// Percentage by which `candidate` undercuts `reference`.
pub fn reduction_percent(reference: f64, candidate: f64) -> f64 {
    100.0 * (reference - candidate) / reference
}

// ---------------------------------------------------------------- trace

/// Runs one `steps`-long episode from a new unit and writes the trace CSV.
pub fn cmd_trace(case: &CaseConfig, source: &PolicySource, steps: usize, seed: u64, out: &Path) -> Result<Vec<StepOutcome>> {
    if steps == 0 {
        return Err(Error::Validation("trace needs at least one step".into()));
    }
    let policy = source.load(case)?;
    let env = case.env()?;
    let mut rng = EnvRng::new(RngStream::derive(seed, domain::TRACE, 0), RngStream::derive(seed, domain::TRACE, 1));
    let trace = env.run_episode(&policy, steps, &mut rng);
    ensure_parent(out)?;
    let meta = RunMeta::new("trace", case, seed).line();
    write_file(out, |w| write_trace_csv(w, &trace, Some(&format!("{meta} policy={}", policy.label()))))?;
    Ok(trace)
}

// ---------------------------------------------------------------- helpers

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn read_artifact(path: &Path, hint: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingArtifact { path: path.to_path_buf(), hint: hint.into() },
        _ => Error::io(path, e),
    })
}

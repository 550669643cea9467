//! Subcommand implementations. Each returns a [`Report`]; writing it out is
//! left to the caller.

use photostat::majorize::OrderedProfile;
use photostat::{
    classify_clustering, classify_poissonian, coherent_distribution, compare, confidence_interval,
    entropy, number_difference_distribution, number_sum_distribution, order_profile,
    sample_beam_splitter, EntropyFamily, EntropyQuery, Leader, MajorizationVerdict, PhotonDistribution,
    ProbabilityVector, Relation,
};

use crate::error::{CliError, CliResult};
use crate::report::{Cell, Report, Table};
use crate::spec::{parse_state_spec, StateSpec};

/// Numerical settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub eps: f64,
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            eps: photostat::DEFAULT_EPS,
            tol: photostat::DEFAULT_TOL,
        }
    }
}

impl Settings {
    fn record(&self, report: &mut Report) {
        report.param("eps", self.eps).param("tol", self.tol);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Criterion {
    Poisson,
    Clustering,
}

/// Confidence levels highlighted in the text, always added to the grid.
pub const HIGHLIGHTED_ALPHAS: [f64; 6] = [0.80, 0.85, 0.9, 0.95, 0.995, 0.997];

/// 999 evenly spaced levels from 0.01 to 0.999, merged with
/// [`HIGHLIGHTED_ALPHAS`].
pub fn alpha_grid() -> Vec<f64> {
    let (lo, hi, n) = (0.01, 0.999, 999);
    let mut grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    grid.extend(HIGHLIGHTED_ALPHAS);
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

pub fn parse_spec(text: &str) -> CliResult<StateSpec> {
    parse_state_spec(text).map_err(|source| CliError::Parse {
        input: text.to_string(),
        source,
    })
}

pub(crate) fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Majorizes => "majorizes",
        Relation::MajorizedBy => "majorized_by",
        Relation::Equal => "equal",
        Relation::Incomparable => "incomparable",
    }
}

fn leader_name(l: Option<Leader>) -> &'static str {
    match l {
        Some(Leader::First) => "first",
        Some(Leader::Second) => "second",
        None => "none",
    }
}

/// Partial sums of several profiles side by side, one row per N.
pub(crate) fn partial_sums_table(name: &str, profiles: &[&OrderedProfile]) -> Table {
    let columns = std::iter::once("N".to_string()).chain(profiles.iter().map(|p| format!("S[{}]", p.label())));
    let mut table = Table::new(name, columns);
    let len = profiles.iter().map(|p| p.len()).max().unwrap_or(0);
    for n in 0..len {
        let mut row = vec![Cell::from(n)];
        row.extend(profiles.iter().map(|p| Cell::from(p.partial_sum(n))));
        table.push(row);
    }
    table
}

/// Every crossing of every listed comparison.
pub(crate) fn crossings_table(comparisons: &[(&str, &str, &MajorizationVerdict)]) -> Table {
    let mut table = Table::new(
        "crossings",
        ["first", "second", "n_interp", "outcomes", "alpha", "leader_before", "band_low", "band_high"],
    );
    for (first, second, verdict) in comparisons {
        for c in &verdict.crossings {
            table.push(vec![
                Cell::from(*first),
                Cell::from(*second),
                c.n_interp.into(),
                c.outcomes().into(),
                c.alpha.into(),
                leader_name(Some(c.before)).into(),
                c.band.0.into(),
                c.band.1.into(),
            ]);
        }
    }
    table
}

fn verdicts_table(comparisons: &[(&str, &str, &MajorizationVerdict)]) -> Table {
    let mut table = Table::new("verdicts", ["first", "second", "relation", "crossings", "effective_until"]);
    for (first, second, v) in comparisons {
        table.push(vec![
            Cell::from(*first),
            Cell::from(*second),
            relation_name(v.relation).into(),
            v.crossings.len().into(),
            v.effective_until().map_or(Cell::from("none"), Cell::from),
        ]);
    }
    table
}

fn confidence_table(profiles: &[&OrderedProfile]) -> CliResult<Table> {
    let columns = std::iter::once("alpha".to_string()).chain(profiles.iter().map(|p| format!("N[{}]", p.label())));
    let mut table = Table::new("confidence_intervals", columns);
    let reachable = profiles.iter().map(|p| p.total_mass()).fold(1.0, f64::min);
    for alpha in alpha_grid() {
        if alpha > reachable {
            continue;
        }
        let mut row = vec![Cell::from(alpha)];
        for p in profiles {
            row.push(confidence_interval(p, alpha)?.into());
        }
        table.push(row);
    }
    Ok(table)
}

fn record_moments(report: &mut Report, prefix: &str, d: &PhotonDistribution) {
    let m = d.moments();
    report
        .param(format!("{prefix}mean"), m.mean)
        .param(format!("{prefix}variance"), m.variance)
        .param(format!("{prefix}variance_ratio"), m.variance / m.mean);
}

pub fn run_dist(spec: &StateSpec, settings: Settings) -> CliResult<Report> {
    let d = spec.build(settings.eps)?;
    let mut report = Report::new("dist");
    report.param("state", spec.to_string());
    settings.record(&mut report);
    record_moments(&mut report, "", &d);
    let m = d.moments();
    report
        .param("n_max", d.n_max())
        .param("tail_bound", d.tail_bound())
        .param("truncation_error", m.truncation_error);

    let mut probs = Table::new("distribution", ["n", "p"]);
    for (n, &p) in d.probs().iter().enumerate() {
        probs.push(vec![n.into(), p.into()]);
    }
    let profile = order_profile(&d);
    let mut ordered = Table::new("ordered", ["N", "p_sorted", "S_N"]);
    for (n, (&p, &s)) in profile.sorted_probs().iter().zip(profile.partial_sums()).enumerate() {
        ordered.push(vec![n.into(), p.into(), s.into()]);
    }
    report.table(probs).table(ordered);
    Ok(report)
}

pub fn run_compare(a: &StateSpec, b: &StateSpec, settings: Settings) -> CliResult<Report> {
    let (da, db) = (a.build(settings.eps)?, b.build(settings.eps)?);
    let (pa, pb) = (order_profile(&da), order_profile(&db));
    let verdict = compare(&pa, &pb, settings.tol)?;
    let mut report = Report::new("compare");
    report.param("a", a.to_string()).param("b", b.to_string());
    settings.record(&mut report);
    record_moments(&mut report, "a_", &da);
    record_moments(&mut report, "b_", &db);
    report
        .param("relation", relation_name(verdict.relation))
        .param("initial_leader", leader_name(verdict.initial_leader()));
    let (la, lb) = (a.to_string(), b.to_string());
    report
        .table(partial_sums_table("partial_sums", &[&pa, &pb]))
        .table(crossings_table(&[(&la, &lb, &verdict)]))
        .table(confidence_table(&[&pa, &pb])?);
    Ok(report)
}

pub fn run_classify(spec: &StateSpec, criterion: Criterion, settings: Settings) -> CliResult<Report> {
    let d = spec.build(settings.eps)?;
    let mut report = Report::new("classify");
    report.param("state", spec.to_string());
    settings.record(&mut report);
    record_moments(&mut report, "", &d);
    match criterion {
        Criterion::Poisson => {
            report.param("criterion", "poisson");
            let v = classify_poissonian(&d, settings.tol)?;
            report.param("class", format!("{:?}", v.class));
            let Some(comparison) = &v.comparison else {
                return Ok(report);
            };
            let reference = coherent_distribution(v.mean, settings.eps)?;
            describe_comparison(&mut report, comparison);
            let (ps, pc) = (order_profile(&d), order_profile(&reference));
            let (ls, lc) = (d.label().to_string(), reference.label().to_string());
            report
                .table(partial_sums_table("partial_sums", &[&ps, &pc]))
                .table(crossings_table(&[(&ls, &lc, comparison)]));
        }
        Criterion::Clustering => {
            report.param("criterion", "clustering");
            let v = classify_clustering(&d, settings.tol)?;
            report.param("class", format!("{:?}", v.class)).param("covariance", v.covariance);
            describe_comparison(&mut report, &v.comparison);
            let plus = order_profile(&number_sum_distribution(&d));
            let minus = order_profile(&number_difference_distribution(&d));
            let (lp, lm) = (plus.label().to_string(), minus.label().to_string());
            report
                .table(partial_sums_table("partial_sums", &[&plus, &minus]))
                .table(crossings_table(&[(&lp, &lm, &v.comparison)]));
        }
    }
    Ok(report)
}

fn describe_comparison(report: &mut Report, v: &MajorizationVerdict) {
    report
        .param("relation", relation_name(v.relation))
        .param("initial_leader", leader_name(v.initial_leader()))
        .param("effective_until", v.effective_until().map_or(Cell::from("none"), Cell::from));
}

pub fn run_entropy(spec: &StateSpec, qs: &[f64], bits: bool, settings: Settings) -> CliResult<Report> {
    let d = spec.build(settings.eps)?;
    let mut report = Report::new("entropy");
    report.param("state", spec.to_string());
    settings.record(&mut report);
    report.param("unit", if bits { "bits" } else { "nats" });
    let scale = if bits { std::f64::consts::LOG2_E } else { 1.0 };
    let mut table = Table::new("entropies", ["family", "q", "value"]);
    table.push(vec!["shannon".into(), 1.0.into(), (entropy(&d, EntropyQuery::shannon())? * scale).into()]);
    for &q in qs {
        for (name, family) in [("renyi", EntropyFamily::Renyi), ("tsallis", EntropyFamily::Tsallis)] {
            let h = entropy(&d, EntropyQuery { family, q })?;
            // Tsallis entropy is not a logarithm; only Rényi changes with the unit.
            let value = if family == EntropyFamily::Renyi { h * scale } else { h };
            table.push(vec![name.into(), q.into(), value.into()]);
        }
    }
    report.table(table);
    Ok(report)
}

pub fn run_sample(spec: &StateSpec, n_samples: u64, seed: u64, settings: Settings) -> CliResult<Report> {
    let d = spec.build(settings.eps)?;
    let sample = sample_beam_splitter(&d, n_samples, seed)?;
    let exact = number_difference_distribution(&d);
    let mut report = Report::new("sample");
    report
        .param("state", spec.to_string())
        .param("n_samples", n_samples)
        .param("seed", seed)
        .param("rng", "ChaCha8, stream = chunk index, 65536 samples per chunk");
    settings.record(&mut report);

    let mut joint = Table::new("joint_counts", ["n1", "n2", "count"]);
    for (&(n1, n2), &count) in &sample.joint_counts {
        joint.push(vec![n1.into(), n2.into(), count.into()]);
    }
    let hist = sample.difference_histogram();
    let mut diff = Table::new("difference", ["m", "count", "empirical", "exact"]);
    let mut tv = 0.0;
    let m_max = exact.m_max() as i64;
    let lo = hist.keys().next().copied().unwrap_or(0).min(-m_max);
    let hi = hist.keys().last().copied().unwrap_or(0).max(m_max);
    for m in lo..=hi {
        let count = hist.get(&m).copied().unwrap_or(0);
        let empirical = count as f64 / n_samples as f64;
        let p = exact.get(m);
        tv += (empirical - p).abs();
        if count > 0 || p > 0.0 {
            diff.push(vec![m.into(), count.into(), empirical.into(), p.into()]);
        }
    }
    report.param("total_variation", 0.5 * tv);
    report.table(joint).table(diff);
    Ok(report)
}

/// Verdicts table for figure reports.
pub(crate) fn figure_tables(
    report: &mut Report,
    profiles: &[&OrderedProfile],
    comparisons: &[(&str, &str, &MajorizationVerdict)],
) {
    report
        .table(partial_sums_table("partial_sums", profiles))
        .table(verdicts_table(comparisons))
        .table(crossings_table(comparisons));
}

/// Labels exposed for figure code.
pub(crate) fn label_of<P: ProbabilityVector + ?Sized>(d: &P) -> String {
    d.label().to_string()
}

//! Polytope generators and batch experiments: the `k·n ≥ d` sweep, where a
//! decomposition must exist for every instance, and the `k·n < d` probe,
//! where generic instances should be infeasible.

mod generate;

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use generate::{
    generate, pick_target, random_coordinate, random_hull_size, rng_for, ExperimentRng, Generator,
    TargetKind,
};

use crate::error::{Error, Result};
use crate::exact_math::Vector;
use crate::polytope::{Polytope, PolytopeFile};
use crate::solver::{
    check_witness, decompose_with, DecompositionRequest, DecompositionWitness, Outcome,
    SearchOptions, Strategy,
};
use crate::testmap::evaluate_phi;

/// Bound on `|Φ|` and on skeleton distances for a row to count as a success.
pub const PHI_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub generator: Generator,
    pub dim: usize,
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
    pub target: TargetKind,
    pub strategy: Strategy,
    /// Parallel tuple search inside each instance; rows lose determinism.
    pub parallel: bool,
}

impl ExperimentSpec {
    pub fn new(
        generator: Generator,
        dim: usize,
        n_range: RangeInclusive<usize>,
        k_range: RangeInclusive<usize>,
        trials: usize,
        seed: u64,
    ) -> Self {
        ExperimentSpec {
            generator,
            dim,
            n_range,
            k_range,
            trials,
            seed,
            target: TargetKind::Interior,
            strategy: Strategy::Direct,
            parallel: false,
        }
    }

    pub fn with_target(mut self, target: TargetKind) -> Self {
        self.target = target;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidExperiment("dim must be at least 1".into()));
        }
        if self.n_range.is_empty() || self.k_range.is_empty() {
            return Err(Error::InvalidExperiment(
                "n and k ranges must be nonempty".into(),
            ));
        }
        if *self.n_range.start() == 0 {
            return Err(Error::InvalidExperiment("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidExperiment("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.n_range
            .clone()
            .flat_map(|n| self.k_range.clone().map(move |k| (n, k)))
            .collect()
    }

    /// One seed per trial, drawn from the sweep seed.
    fn trial_seeds(&self) -> Vec<u64> {
        let mut rng = rng_for(self.seed);
        (0..self.trials).map(|_| rng.next_u64()).collect()
    }

    /// Every instance in report order: trial, then `n`, then `k`.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        self.validate()?;
        let pairs = self.pairs();
        let mut out = Vec::with_capacity(self.trials * pairs.len());
        for (trial, seed) in self.trial_seeds().into_iter().enumerate() {
            let polytope = generate(self.generator, self.dim, seed)?;
            let mut rng = rng_for(seed.rotate_left(32));
            let target = pick_target(&polytope, self.target, &mut rng);
            let file = polytope.to_file_data();
            out.extend(pairs.iter().map(|&(n, k)| Instance {
                trial,
                polytope: file.clone(),
                target: target.clone(),
                n,
                k,
            }));
        }
        Ok(out)
    }
}

/// Everything needed to rerun one row on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub trial: usize,
    pub polytope: PolytopeFile,
    pub target: Vector,
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Witness found, verified exactly, and `Φ` vanishes.
    Witness,
    /// Witness verified exactly but the floating-point test map disagrees.
    PhiNonzero,
    /// Returned witness fails the exact check.
    InvalidWitness,
    /// Search exhausted with every tuple certified infeasible.
    Infeasible,
    /// Search exhausted but some refutation lacked a certificate.
    Uncertified,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Witness => "witness",
            RowStatus::PhiNonzero => "phi_nonzero",
            RowStatus::InvalidWitness => "invalid_witness",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Uncertified => "uncertified",
        }
    }
}

/// One CSV row. Column order is the field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub generator: Generator,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub status: RowStatus,
    pub tuples_examined: usize,
    pub phi_max_abs: Option<f64>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub success: usize,
    pub failure: usize,
    /// Instances with `k·n ≥ d` and no valid witness.
    pub violations: usize,
    /// Feasible draws in an infeasibility probe.
    pub anomalies: usize,
}

/// A feasible draw from the `k·n < d` probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub row: usize,
    pub instance: Instance,
    pub witness: DecompositionWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
    pub anomalies: Vec<Anomaly>,
    /// Parallel to `rows`.
    pub instances: Vec<Instance>,
    /// Witnesses of successful sweep rows, parallel to `rows`.
    #[serde(skip)]
    pub witnesses: Vec<Option<DecompositionWitness>>,
}

impl ExperimentReport {
    /// Writes the rows as CSV with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Zeroes `elapsed_ms`, the only column that varies between identical
    /// deterministic runs.
    pub fn clear_timing(&mut self) {
        for row in &mut self.rows {
            row.elapsed_ms = 0;
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Writes `row-<i>.json` polytope files and an `instances.csv` index
    /// (row, polytope file, point, n, k, status) into `dir`.
    pub fn dump_instances(&self, dir: &std::path::Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut index = csv::Writer::from_path(dir.join("instances.csv"))?;
        index.write_record(["row", "polytope", "point", "n", "k", "status"])?;
        for (i, (inst, row)) in self.instances.iter().zip(&self.rows).enumerate() {
            let file = format!("row-{i}.json");
            std::fs::write(
                dir.join(&file),
                serde_json::to_string_pretty(&inst.polytope)?,
            )?;
            index.write_record([
                i.to_string(),
                file,
                inst.target.to_string(),
                inst.n.to_string(),
                inst.k.to_string(),
                row.status.as_str().to_string(),
            ])?;
        }
        index.flush()?;
        Ok(())
    }
}

struct Measured {
    row: ReportRow,
    witness: Option<DecompositionWitness>,
}

fn run_instance(spec: &ExperimentSpec, inst: &Instance) -> Result<Measured> {
    let polytope = Polytope::from_file_data(&inst.polytope)?;
    let req = DecompositionRequest::homogeneous(&polytope, inst.target.clone(), inst.n, inst.k)?;
    let options = SearchOptions {
        parallel: spec.parallel,
        ..SearchOptions::default()
    };
    let start = Instant::now();
    let outcome = decompose_with(&req, spec.strategy, options)?;
    let tuples_examined = outcome.tuples_examined();
    let (status, phi, witness) = match outcome {
        Outcome::Witness(w) => {
            if !check_witness(&req, &w) {
                (RowStatus::InvalidWitness, None, Some(w))
            } else {
                let eval = evaluate_phi(&w.points, &polytope, inst.k)?;
                let ok = eval.phi_max_abs < PHI_TOLERANCE && eval.psi_max() < PHI_TOLERANCE;
                let status = if ok {
                    RowStatus::Witness
                } else {
                    RowStatus::PhiNonzero
                };
                (status, Some(eval.phi_max_abs), Some(w))
            }
        }
        Outcome::Infeasible(r) if r.all_certified => (RowStatus::Infeasible, None, None),
        Outcome::Infeasible(_) => (RowStatus::Uncertified, None, None),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(Measured {
        row: ReportRow {
            generator: spec.generator,
            d: polytope.dim(),
            n: inst.n,
            k: inst.k,
            status,
            tuples_examined,
            phi_max_abs: phi,
            elapsed_ms,
        },
        witness,
    })
}

type Runs = (
    Vec<ReportRow>,
    Vec<Option<DecompositionWitness>>,
    Vec<Instance>,
);

/// Instances run concurrently; rows come back in instance order.
fn run_all(spec: &ExperimentSpec, instances: Vec<Instance>) -> Result<Runs> {
    let measured: Vec<Measured> = instances
        .par_iter()
        .map(|inst| run_instance(spec, inst))
        .collect::<Result<_>>()?;
    let (rows, witnesses) = measured.into_iter().map(|m| (m.row, m.witness)).unzip();
    Ok((rows, witnesses, instances))
}

/// Runs every instance of a `k·n ≥ d` sweep. Each row must produce a witness
/// that passes the exact check and has `Φ = 0`; a missing or invalid
/// witness counts as a violation.
pub fn run_theorem_sweep(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if let Some((n, k)) = spec.pairs().into_iter().find(|&(n, k)| k * n < spec.dim) {
        return Err(Error::InvalidExperiment(format!(
            "sweep needs k·n ≥ d for every pair; n={n}, k={k}, d={}",
            spec.dim
        )));
    }
    let (rows, witnesses, instances) = run_all(spec, spec.instances()?)?;
    let mut summary = Summary::default();
    for row in &rows {
        match row.status {
            RowStatus::Witness => summary.success += 1,
            RowStatus::PhiNonzero => summary.failure += 1,
            _ => {
                summary.failure += 1;
                summary.violations += 1;
            }
        }
    }
    Ok(ExperimentReport {
        rows,
        summary,
        anomalies: Vec::new(),
        instances,
        witnesses,
    })
}

/// Runs a `k·n < d` probe. Certified infeasible rows are successes,
/// feasible rows are anomalies (reported with their witness, not failed),
/// and infeasible rows without certificates are failures.
pub fn probe_infeasible(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if let Some((n, k)) = spec.pairs().into_iter().find(|&(n, k)| k * n >= spec.dim) {
        return Err(Error::InvalidExperiment(format!(
            "probe needs k·n < d for every pair; n={n}, k={k}, d={}",
            spec.dim
        )));
    }
    let (rows, witnesses, instances) = run_all(spec, spec.instances()?)?;
    let mut summary = Summary::default();
    let mut anomalies = Vec::new();
    for (i, (row, w)) in rows.iter().zip(&witnesses).enumerate() {
        match row.status {
            RowStatus::Infeasible => summary.success += 1,
            RowStatus::Witness | RowStatus::PhiNonzero => {
                summary.anomalies += 1;
                anomalies.push(Anomaly {
                    row: i,
                    instance: instances[i].clone(),
                    witness: w.clone().expect("feasible rows carry a witness"),
                });
            }
            RowStatus::InvalidWitness | RowStatus::Uncertified => summary.failure += 1,
        }
    }
    Ok(ExperimentReport {
        rows,
        summary,
        anomalies,
        instances,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn without_elapsed(csv: &str) -> Vec<String> {
        csv.lines()
            .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
            .collect()
    }

    #[test]
    fn single_square_row() {
        let spec = ExperimentSpec::new(Generator::Cube, 2, 2..=2, 1..=1, 1, 0);
        let report = run_theorem_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].status, RowStatus::Witness);
        assert_eq!(report.summary.success, 1);
        assert_eq!(report.summary.violations, 0);
        let csv = report.to_csv_string();
        assert!(csv.starts_with("generator,d,n,k,status,tuples_examined,phi_max_abs,elapsed_ms\n"));
        assert!(csv.contains("cube,2,2,1,witness,"));
    }

    #[test]
    fn sweep_rejects_small_kn() {
        let spec = ExperimentSpec::new(Generator::Cube, 3, 1..=2, 1..=1, 1, 0);
        assert!(matches!(
            run_theorem_sweep(&spec),
            Err(Error::InvalidExperiment(_))
        ));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = ExperimentSpec::new(Generator::Cube, 2, 2..=1, 1..=1, 1, 0);
        assert!(run_theorem_sweep(&empty).is_err());
        let no_trials = ExperimentSpec::new(Generator::Cube, 2, 2..=2, 1..=1, 0, 0);
        assert!(run_theorem_sweep(&no_trials).is_err());
    }

    #[test]
    fn probe_rejects_large_kn_and_refutes_square_center() {
        let spec = ExperimentSpec::new(Generator::Cube, 2, 2..=2, 1..=1, 1, 0);
        assert!(probe_infeasible(&spec).is_err());
        let spec = ExperimentSpec::new(Generator::Cube, 2, 1..=1, 1..=1, 1, 0)
            .with_target(TargetKind::Barycenter);
        let report = probe_infeasible(&spec).unwrap();
        assert_eq!(report.rows[0].status, RowStatus::Infeasible);
        assert_eq!(report.summary.success, 1);
        assert!(report.anomalies.is_empty());
    }

    #[test]
    fn reports_repeat_modulo_timing() {
        let spec = ExperimentSpec::new(Generator::RandomHull, 2, 2..=3, 1..=2, 3, 9)
            .with_target(TargetKind::Boundary);
        let mut a = run_theorem_sweep(&spec).unwrap();
        let mut b = run_theorem_sweep(&spec).unwrap();
        assert_eq!(
            without_elapsed(&a.to_csv_string()),
            without_elapsed(&b.to_csv_string())
        );
        a.clear_timing();
        b.clear_timing();
        assert_eq!(a.to_csv_string(), b.to_csv_string());
        assert_eq!(a.instances, b.instances);
        assert_eq!(a.rows.len(), 3 * 2 * 2);
        assert_eq!(a.summary.success, 12);
    }
}

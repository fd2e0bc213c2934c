//! Seeded experiment sweeps and their CSV output.
//!
//! Every instance draws from its own ChaCha8 stream seeded by
//! [`instance_seed`], so results do not depend on the number of worker
//! threads or on scheduling order.

mod config;
mod records;

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{
    log_space, ContinuousFamily, ExperimentConfig, ExperimentKind, GridAxis, GroverParams,
    HeatmapParams, Metric, NoiseModel, QecParams, DEFAULT_P_MAX, DEFAULT_P_MIN,
};
pub use records::{
    fmt_f64, read_csv, write_csv, write_records, CsvRecord, EntropyRecord, GroverRecord,
    HeatmapRecord, QecRecord,
};

use crate::circuits::{build_grover, build_random_clifford, execute, inject_noise, Circuit, GroverSpec};
use crate::circuits::RandomCliffordSpec;
use crate::error::{Error, Result};
use crate::noise::{ChannelMatch, NoiseSpec};
use crate::propagation::{build_approx_circuit, propagate_variances};
use crate::qec::{CodeCircuit, CodeExperimentSpec, MetricMode};
use crate::statevector::sample_indices;

/// Full-model infidelities at or below this leave the heatmap ratio undefined.
pub const UNDEFINED_INFIDELITY: f64 = 1e-14;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stable seed for one unit of work: a splitmix64 fold over the master seed,
/// the experiment kind and the coordinates of the instance.
pub fn instance_seed(master: u64, kind: ExperimentKind, parts: &[u64]) -> u64 {
    let mut h = splitmix64(splitmix64(master) ^ kind.tag());
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

/// One grid point annotated on both axes.
pub fn grid_matches(config: &ExperimentConfig) -> Result<Vec<ChannelMatch>> {
    let axis = if config.grid.is_empty() { GridAxis::P } else { config.grid_axis };
    config
        .grid_values()
        .into_iter()
        .map(|g| match axis {
            GridAxis::P => ChannelMatch::from_pauli_rate(g),
            GridAxis::Sigma => ChannelMatch::from_sigma(g),
        })
        .collect()
}

fn continuous_spec(config: &ExperimentConfig, point: &ChannelMatch) -> NoiseSpec {
    match config.continuous_family {
        ContinuousFamily::Gaussian => NoiseSpec::Gaussian { sigma: point.sigma },
        ContinuousFamily::Vmf => NoiseSpec::Vmf { kappa: point.kappa },
    }
}

/// Sample mean and binomial standard error `√(p̂(1−p̂)/n)`.
pub fn binomial_estimate(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let p = mean.clamp(0.0, 1.0);
    (mean, (p * (1.0 - p) / n).sqrt())
}

/// Run `n` seeded instances in parallel; results come back in instance order.
fn run_instances<F>(n: usize, seed: impl Fn(u64) -> u64 + Sync, context: impl Fn(usize) -> String + Sync, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed(i as u64));
            f(&mut rng).map_err(|e| Error::Experiment {
                context: format!("{} instance {i}", context(i)),
                source: Box::new(e),
            })
        })
        .collect()
}

fn model_tag(model: &str) -> u64 {
    match model {
        "continuous" => 1,
        "pauli" => 2,
        "approx" => 3,
        _ => 0,
    }
}

/// Logical error rates of the code circuits over the noise grid.
pub fn run_qec_sweep(config: &ExperimentConfig) -> Result<Vec<QecRecord>> {
    config.validate()?;
    let kind = ExperimentKind::QecSweep;
    let grid = grid_matches(config)?;
    let metric = match config.metric {
        Metric::Overlap => MetricMode::Overlap,
        Metric::Shots => MetricMode::Shots { n_shots: config.n_shots },
    };
    let mut records = Vec::new();
    for &code in &config.qec.codes {
        for &m in &config.qec.m {
            for &ec in &config.qec.ec {
                let spec = CodeExperimentSpec { code, m, ec: ec == 1, metric };
                let cc = CodeCircuit::build(spec)?;
                let tracked = {
                    let start = if config.qec.approx_include_encoding { 0 } else { cc.encoding_len };
                    let mut c = Circuit::new(cc.circuit.n_qubits, cc.circuit.n_clbits);
                    c.ops = cc.circuit.ops[start..cc.core_len].to_vec();
                    c
                };
                let (core, tail) = (cc.core(), cc.tail());
                let mut models = Vec::new();
                if config.noise_model.continuous() {
                    models.push("continuous");
                }
                if config.noise_model.pauli() {
                    models.push("pauli");
                }
                if config.qec.approximation {
                    models.push("approx");
                }
                for model in models {
                    for (gi, point) in grid.iter().enumerate() {
                        let context = |_: usize| {
                            format!("qec_sweep code={code} m={m} ec={ec} model={model} grid[{gi}] p={}", point.p)
                        };
                        let seed = |i| {
                            instance_seed(
                                config.master_seed,
                                kind,
                                &[code as u64, m as u64, u64::from(ec), model_tag(model), gi as u64, i],
                            )
                        };
                        let samples = match model {
                            "approx" => {
                                let result = propagate_variances(&tracked, point.sigma)?;
                                run_instances(config.n_instances, seed, context, |rng| {
                                    let c = build_approx_circuit(&core, &tail, &result, rng)?;
                                    let (s, _) = execute(&c, rng)?;
                                    cc.p_err(&s, rng)
                                })?
                            }
                            _ => {
                                let noise = if model == "pauli" {
                                    NoiseSpec::Pauli { p: point.p }
                                } else {
                                    continuous_spec(config, point)
                                };
                                run_instances(config.n_instances, seed, context, |rng| {
                                    let c = inject_noise(&cc.circuit, &noise, rng)?;
                                    let (s, _) = execute(&c, rng)?;
                                    cc.p_err(&s, rng)
                                })?
                            }
                        };
                        let (p_err, stderr) = binomial_estimate(&samples);
                        records.push(QecRecord {
                            code,
                            m,
                            ec,
                            model: model.to_string(),
                            p: point.p,
                            sigma: point.sigma,
                            kappa: point.kappa,
                            entropy: point.entropy,
                            p_err,
                            stderr,
                            n_instances: config.n_instances,
                        });
                    }
                }
            }
        }
    }
    Ok(records)
}

/// Grover failure probability `1 − P(marked)` over the noise grid.
pub fn run_grover_sweep(config: &ExperimentConfig) -> Result<Vec<GroverRecord>> {
    config.validate()?;
    let kind = ExperimentKind::GroverSweep;
    let grid = grid_matches(config)?;
    let mut records = Vec::new();
    for &n in &config.grover.n {
        let marked = config.grover.marked_for(n);
        let spec = GroverSpec::new(&marked).with_iterations(config.grover.iterations.count(n));
        let circuit = build_grover(&spec)?;
        let target = spec.marked_index()?;
        let mut models = Vec::new();
        if config.noise_model.continuous() {
            models.push("continuous");
        }
        if config.noise_model.pauli() {
            models.push("pauli");
        }
        for model in models {
            for (gi, point) in grid.iter().enumerate() {
                let noise = if model == "pauli" {
                    NoiseSpec::Pauli { p: point.p }
                } else {
                    continuous_spec(config, point)
                };
                let samples = run_instances(
                    config.n_instances,
                    |i| instance_seed(config.master_seed, kind, &[n as u64, model_tag(model), gi as u64, i]),
                    |_| format!("grover_sweep N={n} model={model} grid[{gi}] p={}", point.p),
                    |rng| {
                        let c = inject_noise(&circuit, &noise, rng)?;
                        let (s, _) = execute(&c, rng)?;
                        match config.metric {
                            Metric::Overlap => Ok(1.0 - s.amplitudes()[target].norm_sqr()),
                            Metric::Shots => {
                                let probs: Vec<f64> = s.amplitudes().iter().map(|a| a.norm_sqr()).collect();
                                let hits = sample_indices(&probs, config.n_shots, rng)
                                    .into_iter()
                                    .filter(|&k| k == target)
                                    .count();
                                Ok(1.0 - hits as f64 / config.n_shots as f64)
                            }
                        }
                    },
                )?;
                let (gsa_err, stderr) = binomial_estimate(&samples);
                records.push(GroverRecord {
                    n,
                    model: model.to_string(),
                    p: point.p,
                    sigma: point.sigma,
                    entropy: point.entropy,
                    gsa_err,
                    stderr,
                });
            }
        }
    }
    Ok(records)
}

/// Infidelities `(full model, approximation)` of one random circuit.
fn heatmap_sample(
    spec: &RandomCliffordSpec,
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    let c = build_random_clifford(spec)?;
    let (ideal, _) = execute(&c, rng)?;
    let noisy = inject_noise(&c, &NoiseSpec::Gaussian { sigma }, rng)?;
    let (model, _) = execute(&noisy, rng)?;
    let tracks = propagate_variances(&c, sigma)?;
    let approx_c = build_approx_circuit(&c, &Circuit::new(c.n_qubits, 0), &tracks, rng)?;
    let (approx, _) = execute(&approx_c, rng)?;
    Ok((model.infidelity(&ideal)?, approx.infidelity(&ideal)?))
}

/// Mean and variance of the approximation-to-model infidelity ratio per
/// `(n_H, n_CNOT)` cell, one fresh circuit and noise draw per sample.
pub fn run_clifford_heatmap(config: &ExperimentConfig) -> Result<Vec<HeatmapRecord>> {
    config.validate()?;
    let kind = ExperimentKind::CliffordHeatmap;
    let grid = grid_matches(config)?;
    let h = &config.heatmap;
    let mut records = Vec::new();
    for (gi, point) in grid.iter().enumerate() {
        let sigma = point.sigma;
        for &n_h in &h.n_h {
            for &n_cnot in &h.n_cnot {
                let pairs: Vec<(f64, f64)> = (0..h.circuits_per_cell)
                    .into_par_iter()
                    .map(|j| {
                        let key = [gi as u64, n_h as u64, n_cnot as u64, j as u64];
                        let spec = RandomCliffordSpec {
                            n_qubits: h.n_qubits,
                            n_hadamard: n_h,
                            n_cnot,
                            seed: instance_seed(config.master_seed, kind, &[key[0], key[1], key[2], key[3], 0]),
                        };
                        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(
                            config.master_seed,
                            kind,
                            &[key[0], key[1], key[2], key[3], 1],
                        ));
                        heatmap_sample(&spec, sigma, &mut rng).map_err(|e| Error::Experiment {
                            context: format!("clifford_heatmap sigma={sigma} n_h={n_h} n_cnot={n_cnot} circuit {j}"),
                            source: Box::new(e),
                        })
                    })
                    .collect::<Result<_>>()?;
                let ratios: Vec<f64> = pairs
                    .iter()
                    .filter(|(model, _)| *model > UNDEFINED_INFIDELITY)
                    .map(|(model, approx)| approx / model)
                    .collect();
                let n_valid = ratios.len();
                let mean = ratios.iter().sum::<f64>() / n_valid as f64;
                let var = if n_valid > 1 {
                    ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n_valid - 1) as f64
                } else {
                    f64::NAN
                };
                records.push(HeatmapRecord {
                    n_h,
                    n_cnot,
                    sigma,
                    mean_ratio: if n_valid > 0 { mean } else { f64::NAN },
                    var_ratio: var,
                    n_valid,
                    n_undefined: pairs.len() - n_valid,
                });
            }
        }
    }
    Ok(records)
}

/// The entropy-matched axes `(p, p_bf, κ, σ, H)` for each grid rate.
pub fn run_entropy_table(config: &ExperimentConfig) -> Result<Vec<EntropyRecord>> {
    config.validate()?;
    config
        .grid_values()
        .into_iter()
        .map(|p| {
            let m = ChannelMatch::from_pauli_rate(p)?;
            Ok(EntropyRecord { p: m.p, p_bf: m.p_bf, kappa: m.kappa, sigma: m.sigma, entropy: m.entropy })
        })
        .collect()
}

/// Records produced by one run.
#[derive(Clone, Debug, PartialEq)]
pub enum RunOutput {
    Qec(Vec<QecRecord>),
    Grover(Vec<GroverRecord>),
    Heatmap(Vec<HeatmapRecord>),
    Entropy(Vec<EntropyRecord>),
}

impl RunOutput {
    pub fn len(&self) -> usize {
        match self {
            RunOutput::Qec(r) => r.len(),
            RunOutput::Grover(r) => r.len(),
            RunOutput::Heatmap(r) => r.len(),
            RunOutput::Entropy(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        match self {
            RunOutput::Qec(r) => write_csv(r, path),
            RunOutput::Grover(r) => write_csv(r, path),
            RunOutput::Heatmap(r) => write_csv(r, path),
            RunOutput::Entropy(r) => write_csv(r, path),
        }
    }

    pub fn write_to<W: std::io::Write>(&self, sink: W) -> csv::Result<()> {
        match self {
            RunOutput::Qec(r) => write_records(r, sink),
            RunOutput::Grover(r) => write_records(r, sink),
            RunOutput::Heatmap(r) => write_records(r, sink),
            RunOutput::Entropy(r) => write_records(r, sink),
        }
    }
}

/// Dispatch on `config.kind`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    Ok(match config.kind {
        ExperimentKind::QecSweep => RunOutput::Qec(run_qec_sweep(config)?),
        ExperimentKind::GroverSweep => RunOutput::Grover(run_grover_sweep(config)?),
        ExperimentKind::CliffordHeatmap => RunOutput::Heatmap(run_clifford_heatmap(config)?),
        ExperimentKind::EntropyTable => RunOutput::Entropy(run_entropy_table(config)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qec::CodeId;

    fn small_qec() -> ExperimentConfig {
        let mut c = ExperimentConfig::for_kind(ExperimentKind::QecSweep);
        c.grid = vec![0.0, 1e-2];
        c.n_instances = 16;
        c.qec.codes = vec![CodeId::Five];
        c.qec.m = vec![2];
        c.qec.approximation = true;
        c
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = instance_seed(1, ExperimentKind::QecSweep, &[0, 1, 2]);
        assert_eq!(a, instance_seed(1, ExperimentKind::QecSweep, &[0, 1, 2]));
        assert_ne!(a, instance_seed(2, ExperimentKind::QecSweep, &[0, 1, 2]));
        assert_ne!(a, instance_seed(1, ExperimentKind::GroverSweep, &[0, 1, 2]));
        assert_ne!(a, instance_seed(1, ExperimentKind::QecSweep, &[0, 2, 1]));
    }

    #[test]
    fn noiseless_grid_point_is_exact() {
        let recs = run_qec_sweep(&small_qec()).unwrap();
        // 2 ec values × 3 models × 2 grid points
        assert_eq!(recs.len(), 12);
        for r in recs.iter().filter(|r| r.p == 0.0) {
            assert!(r.p_err < 1e-10, "{r:?}");
            assert_eq!(r.sigma, 0.0);
        }
        assert!(recs.iter().filter(|r| r.p > 0.0).all(|r| r.p_err > 0.0));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c = small_qec();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| run_qec_sweep(&c)).unwrap();
        let b = three.install(|| run_qec_sweep(&c)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grover_large_noise_scrambles() {
        let mut c = ExperimentConfig::for_kind(ExperimentKind::GroverSweep);
        c.grover.n = vec![3];
        c.grid = vec![0.0, 0.7];
        c.n_instances = 200;
        c.noise_model = NoiseModel::Pauli;
        c.grover.iterations = crate::circuits::IterationRule::Optimal;
        let r = run_grover_sweep(&c).unwrap();
        assert!((r[0].gsa_err - (1.0 - 0.9453125)).abs() < 1e-10);
        assert!((r[1].gsa_err - 0.875).abs() < 5.0 * r[1].stderr.max(0.01), "{:?}", r[1]);
    }

    #[test]
    fn grover_shots_metric() {
        let mut c = ExperimentConfig::for_kind(ExperimentKind::GroverSweep);
        c.grover.n = vec![3];
        c.grid = vec![0.0];
        c.n_instances = 50;
        c.metric = Metric::Shots;
        c.grover.iterations = crate::circuits::IterationRule::Optimal;
        let r = run_grover_sweep(&c).unwrap();
        let p: f64 = 1.0 - 0.9453125;
        let se = (p * (1.0 - p) / (50.0 * 100.0)).sqrt();
        assert!((r[0].gsa_err - p).abs() < 4.0 * se);
    }

    #[test]
    fn heatmap_zero_sigma_is_undefined() {
        let mut c = ExperimentConfig::for_kind(ExperimentKind::CliffordHeatmap);
        c.grid = vec![0.0];
        c.heatmap.n_h = vec![5];
        c.heatmap.n_cnot = vec![5];
        c.heatmap.circuits_per_cell = 4;
        let r = run_clifford_heatmap(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].n_valid, r[0].n_undefined), (0, 4));
        assert!(r[0].mean_ratio.is_nan());
    }

    #[test]
    fn entropy_table_rows() {
        let mut c = ExperimentConfig::for_kind(ExperimentKind::EntropyTable);
        c.grid = vec![1e-4, 1e-2, 0.75];
        let r = run_entropy_table(&c).unwrap();
        assert!(r.windows(2).all(|w| w[1].entropy > w[0].entropy));
        assert!((r[2].entropy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_errors() {
        let (m, se) = binomial_estimate(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(m, 0.5);
        assert!((se - 0.25).abs() < 1e-15);
    }
}

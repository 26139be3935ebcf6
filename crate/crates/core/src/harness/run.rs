//! Dispatch from a config to a lab operation, plus the `simulate`, `exact`
//! and `verify-all` front ends.

use std::path::{Path, PathBuf};
use std::time::Instant;

use super::artifacts::{render_csv, render_json, write_file};
use super::config::{ExperimentConfig, ExperimentKind, FamilyKind, Format, Scale};
use super::criteria::{pairwise_collision_mean, run_criterion, CRITERIA};
use crate::error::{domain, Result};
use crate::exact::{
    backbone_return_asymptote, backbone_return_series, comb_kernel_dp, hitting_limit_cdf, hitting_partial_sum,
    hitting_pmf, into_origin_prob, return_prediction, reversibility_scan, vertical_profile_from, OriginSweep,
};
use crate::lab::{
    collision_growth_experiment, comb_pair_run, construction_equivalence, distance_cdf_experiment, dyadic_from,
    hitting_time_gof, lil_profiles, series_classify, tail_bound_checks, CombPairRun, ExperimentReport, Family,
    Graph, LilSpec, LowerClassSpec, SeriesCriterion, SeriesVerdict, Statistic, TailSpec,
};
use crate::lattice::CombVertex;
use crate::metrics::{max_pairwise_comb, CollisionTally};
use crate::rng::{experiment_key, RngStream};
use crate::stats::{least_squares, mean, median};
use crate::walk::{comb_step_direct, zd_step};

/// Reports plus the rendered artifacts and where they were written.
#[derive(Debug)]
pub struct Outcome {
    pub reports: Vec<ExperimentReport>,
    pub csv: String,
    pub json: String,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// Run `f` on a dedicated pool of `threads` workers (`None`: rayon's default).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| domain(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn finish(
    command: &str,
    mut reports: Vec<ExperimentReport>,
    hash: &str,
    seed: u64,
    started: Instant,
    out: Option<(&Path, Format)>,
) -> Result<Outcome> {
    for r in &mut reports {
        r.config_hash = hash.to_string();
    }
    let csv = render_csv(&reports, hash, seed);
    let json = render_json(command, &reports, hash, seed, started.elapsed().as_secs_f64());
    let mut written = Vec::new();
    if let Some((dir, format)) = out {
        let stem = command.replace('-', "_");
        if format.csv() {
            written.push(write_file(dir, &format!("{stem}.csv"), &csv)?);
        }
        if format.json() {
            written.push(write_file(dir, &format!("{stem}.json"), &json)?);
        }
    }
    Ok(Outcome { reports, csv, json, written })
}

/// Execute the configured experiment and write its artifacts under `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, write: bool) -> Result<Outcome> {
    let started = Instant::now();
    let report = execute(cfg)?;
    let dir = PathBuf::from(&cfg.output_dir);
    finish(
        "experiment",
        vec![report],
        &cfg.hash(),
        cfg.master_seed,
        started,
        write.then_some((dir.as_path(), cfg.format)),
    )
}

/// All acceptance criteria at `scale`.
pub fn verify_all(scale: Scale, seed: u64, out: Option<(&Path, Format)>) -> Result<Outcome> {
    let started = Instant::now();
    let reports = CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, scale, seed))
        .collect::<Result<Vec<_>>>()?;
    let hash = format!("verify_all_{}", if scale == Scale::Full { "full" } else { "smoke" });
    finish("verify-all", reports, &hash, seed, started, out)
}

/// The lab operation named by `cfg.experiment`, with verdicts.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    use ExperimentKind::*;
    let seed = cfg.master_seed;
    match cfg.experiment {
        HittingGof => {
            let g = hitting_time_gof(cfg.level, cfg.horizon, cfg.replicates, seed, cfg.p_threshold)?;
            let mut rep = g.report(seed);
            rep.verdict(
                &format!("chi-square p > {}", cfg.p_threshold),
                "first-passage law of the simple walk",
                g.test.verdict,
                format!("p = {:.5}", g.test.p_value.unwrap_or(0.0)),
            );
            Ok(rep)
        }
        HittingLimit => {
            let tol = cfg.tolerance.unwrap_or(0.01);
            let r = cfg.level;
            let mut rep = ExperimentReport::new("hitting_limit", seed);
            let mut ok = true;
            for u in [0.25, 0.5, 1.0, 2.0, 4.0] {
                let bound = (u * (r * r) as f64).ceil() as u64;
                let partial = hitting_partial_sum(r, bound)?;
                let limit = hitting_limit_cdf(u)?;
                let pass = (partial - limit).abs() <= tol;
                ok &= pass;
                rep.row(bound, 0, &format!("partial_sum_u{u}"), partial).with_target(limit, tol, pass);
            }
            rep.verdict(&format!("partial sums within {tol} of the limit"), "scaling limit of the first-passage law", ok, format!("r = {r}"));
            Ok(rep)
        }
        DistanceCdf => {
            let d = distance_cdf_experiment(cfg.d as usize, cfg.k as usize, cfg.n_max, cfg.replicates, seed)?;
            let mut rep = d.report(seed)?;
            rep.verdict(
                &format!("KS distance <= {}", cfg.ks_threshold),
                "limiting CDF of the normalized maximal distance",
                d.ks_distance <= cfg.ks_threshold,
                format!("KS = {:.5}", d.ks_distance),
            );
            Ok(rep)
        }
        Reversibility => {
            let tol = cfg.tolerance.unwrap_or(1e-12);
            let scan = reversibility_scan(cfg.k_max as i64, cfg.horizon)?;
            let mut rep = ExperimentReport::new("reversibility", seed);
            let pass = scan.max_defect <= tol;
            rep.row(cfg.horizon, 0, "max_defect", scan.max_defect).with_target(0.0, tol, pass);
            rep.verdict(
                &format!("detailed balance defect <= {tol:e}"),
                "reversibility of the comb walk",
                pass,
                format!("worst (k, n) = {:?}", scan.worst),
            );
            Ok(rep)
        }
        BackboneReturn => {
            let tol = cfg.tolerance.unwrap_or(0.1);
            let series = backbone_return_series(cfg.horizon)?;
            let mut rep = ExperimentReport::new("backbone_return", seed);
            for t in dyadic_from(16, cfg.horizon).into_iter().filter(|t| t % 2 == 0) {
                let a = backbone_return_asymptote(t);
                rep.row(t, 0, "p_backbone", series[t as usize]).with_target(a, tol * a, (series[t as usize] / a - 1.0).abs() <= tol);
            }
            let n = cfg.horizon - cfg.horizon % 2;
            let err = (series[n as usize] / backbone_return_asymptote(n) - 1.0).abs();
            rep.verdict(
                &format!("relative error to √2/√(πn) <= {tol} at n = {n}"),
                "backbone return asymptotics",
                err <= tol,
                format!("{err:.5}"),
            );
            Ok(rep)
        }
        VerticalProfile => {
            let tol = cfg.tolerance.unwrap_or(0.1);
            let n = cfg.horizon;
            let mut sweep = OriginSweep::new(n)?;
            sweep.advance_to(n)?;
            let profile = vertical_profile_from(&sweep, cfg.k_max)?;
            let mut rep = ExperimentReport::new("vertical_profile", seed);
            for (k, s) in profile.live_entries() {
                rep.row(n, 0, &format!("scaled_k{k}"), s);
            }
            let ratio = profile.constant / profile.scaled[0];
            rep.verdict(
                "max_k n^(3/4) p((0,0),(0,k),n) <= 1.2 x its k = 0 value",
                "n^(-3/4) bound on vertical transition probabilities",
                ratio <= 1.2,
                format!("ratio {ratio:.4}"),
            );
            if n.is_multiple_of(2) {
                let mut worst = 0.0f64;
                for k in (0..=cfg.k_max).step_by(2) {
                    let r = into_origin_prob(&sweep, k as i64) / return_prediction(n, k)?;
                    worst = worst.max((r - 1.0).abs());
                    rep.row(n, 0, &format!("dp_over_prediction_k{k}"), r);
                }
                rep.verdict(
                    &format!("DP / local-limit prediction within {tol} for even k"),
                    "local limit theorem for vertical returns",
                    worst <= tol,
                    format!("max deviation {worst:.5}"),
                );
            }
            Ok(rep)
        }
        Lil => lil(cfg),
        Collisions => collisions(cfg),
        BackboneCoincidence => {
            let run = comb_pair_run(&pair_spec(cfg), &[])?;
            let mut rep = run.report();
            let mean = run.mean_coincidences(cfg.n_max).expect("checkpoint");
            let target = CombPairRun::coincidence_target(cfg.n_max);
            let factor = cfg.tolerance.unwrap_or(2.0);
            rep.verdict(
                &format!("mean simultaneous-backbone count within a factor {factor} of (2/π) ln n"),
                "two comb walkers meet the backbone together infinitely often",
                mean >= target / factor && mean <= target * factor,
                format!("{mean:.3} vs {target:.3}"),
            );
            Ok(rep)
        }
        LowerClass => lower_class(cfg),
        TailBounds => tails(cfg),
        Series => {
            let family = match cfg.family {
                FamilyKind::Power => Family::Power { alpha: cfg.alpha },
                FamilyKind::LogPower => Family::LogPower { beta: cfg.beta },
            };
            let c = match cfg.graph() {
                Graph::Zd { d } if cfg.k == 1 => SeriesCriterion::single(family, d as i64),
                Graph::Zd { d } => SeriesCriterion::zd(family, cfg.k as i64, d as i64),
                Graph::Comb => SeriesCriterion::comb(family, cfg.k as i64),
            };
            let verdict = series_classify(&c)?;
            let mut rep = ExperimentReport::new("series", seed);
            if let Some(s) = crate::lab::series::partial_sum(&c, 200) {
                rep.row(200, 0, "partial_sum_200_terms", s);
            }
            rep.row(0, 0, "exponent", c.exponent as f64);
            rep.row(0, 0, "convergent", f64::from(u8::from(verdict == SeriesVerdict::Convergent)));
            rep.verdict(
                "series classified",
                "lower-class criterion for the maximal distance",
                verdict != SeriesVerdict::Inconclusive,
                format!("{verdict:?}: a is in the lower class iff the series converges"),
            );
            Ok(rep)
        }
        Construction => {
            let c = construction_equivalence(cfg.n_max, cfg.replicates, seed, cfg.p_threshold)?;
            let mut rep = c.report(seed);
            rep.verdict(
                &format!("two-sample chi-square p > {}", cfg.p_threshold),
                "the constructed comb walk has the comb-walk law",
                c.test.verdict,
                format!("p = {:.5}", c.test.p_value.unwrap_or(0.0)),
            );
            rep.verdict("H_n + V_n = n", "horizontal and vertical step counts partition time", c.step_counts_consistent, "");
            Ok(rep)
        }
    }
}

fn default_band(graph: Graph, statistic: Statistic) -> (f64, f64) {
    let c1 = 2f64.powf(1.25) / 3f64.powf(0.75);
    match (graph, statistic) {
        (Graph::Comb, Statistic::Horizontal) => (0.5 * c1, 1.3 * c1),
        (Graph::Comb, _) => (0.7, 1.1),
        (Graph::Zd { .. }, Statistic::Norm) => (0.7, 1.1),
        (Graph::Zd { .. }, _) => (1.3, 2.2),
    }
}

fn lil(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let spec = LilSpec {
        graph: cfg.graph(),
        k: cfg.k as usize,
        n_max: cfg.n_max,
        replicates: cfg.replicates,
        seed: cfg.master_seed,
        burn_in: cfg.burn_in,
    };
    let p = lil_profiles(&spec, &[cfg.statistic])?.remove(0);
    let (dlo, dhi) = default_band(spec.graph, cfg.statistic);
    let (lo, hi) = (cfg.band_low.unwrap_or(dlo), cfg.band_high.unwrap_or(dhi));
    let mut rep = ExperimentReport::new(format!("lil_{}_{}", spec.graph.label(), cfg.statistic.label()), cfg.master_seed);
    for (c, &t) in p.checkpoints.iter().enumerate() {
        rep.row(t, cfg.replicates, "ensemble_max", p.ensemble_max[c]);
        rep.row(t, cfg.replicates, "ensemble_median", p.ensemble_median[c]);
    }
    let m = p.final_ensemble_max();
    rep.row(cfg.n_max, cfg.replicates, "final_ensemble_max", m).with_target(p.target_constant, hi - lo, (lo..=hi).contains(&m));
    rep.verdict(
        &format!("ensemble max of the running max / {} in [{lo:.4}, {hi:.4}]", p.normalizer),
        "law of the iterated logarithm",
        (lo..=hi).contains(&m),
        format!("max {m:.4}, target {:.4}", p.target_constant),
    );
    Ok(rep)
}

fn collisions(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let graph = cfg.graph();
    let k = cfg.k as usize;
    let extra = [cfg.window_start.min(cfg.n_max)];
    let g = collision_growth_experiment(graph, k, cfg.n_max, cfg.replicates, cfg.master_seed, &extra)?;
    let mut rep = g.report(cfg.master_seed);
    match (graph, k) {
        (Graph::Zd { d: 1 }, 2) => {
            let tol = cfg.tolerance.unwrap_or(0.05);
            let mean = g.mean_pairwise(cfg.n_max).expect("checkpoint");
            let oracle = pairwise_collision_mean(cfg.n_max);
            rep.verdict(
                &format!("mean collision count within {tol} (relative) of the convolution value"),
                "collision count of two walkers on the line",
                (mean / oracle - 1.0).abs() <= tol,
                format!("{mean:.4} vs {oracle:.4}"),
            );
        }
        (Graph::Zd { d: 1 }, 3) | (Graph::Zd { d: 2 }, 2) => {
            let medians: Vec<f64> = g.checkpoints.iter().map(|&t| g.median_full(t).expect("checkpoint")).collect();
            let grows = medians.windows(2).all(|w| w[1] >= w[0])
                && g.median_full(cfg.n_max) > g.median_full(extra[0]);
            rep.verdict(
                "median full-collision count grows along the checkpoints",
                "recurrent ensembles collide infinitely often",
                grows,
                format!("{medians:?}"),
            );
        }
        (Graph::Comb, 2) => {
            let late: Vec<f64> = g.pairwise_between(extra[0], cfg.n_max).expect("checkpoints").iter().map(|&c| c as f64).collect();
            let med = median(&late);
            rep.verdict(
                &format!("median collision count after {} is 0", extra[0]),
                "two comb walkers collide finitely often",
                med == 0.0,
                format!("median {med}, mean {:.3}", mean(&late)),
            );
        }
        _ => {}
    }
    Ok(rep)
}

fn pair_spec(cfg: &ExperimentConfig) -> LowerClassSpec {
    LowerClassSpec {
        n_max: cfg.n_max,
        replicates: cfg.replicates,
        seed: cfg.master_seed,
        eps: cfg.eps,
        window_start: cfg.window_start,
        small_from: 4096.min(cfg.n_max),
    }
}

fn lower_class(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let run = comb_pair_run(&pair_spec(cfg), &[])?;
    let mut rep = run.report();
    let reps = run.final_distance.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = run
        .small_times
        .iter()
        .zip(&run.small_different_teeth)
        .filter(|(_, &c)| c > 0)
        .map(|(&t, &c)| ((t as f64).ln(), (c as f64 / reps).ln()))
        .unzip();
    let bound = -(0.5 + 3.0 * cfg.eps) + 0.15;
    if xs.len() >= 2 {
        let (slope, _) = least_squares(&xs, &ys)?;
        rep.row(cfg.n_max, reps as u64, "different_teeth_loglog_slope", slope).with_target(bound, 0.0, slope <= bound);
        rep.verdict(
            &format!("log-log slope of the different-teeth small-distance frequency <= {bound:.3}"),
            "probability bound for the small-distance event",
            slope <= bound,
            format!("slope {slope:.4} over {} dyadic times", xs.len()),
        );
    } else {
        rep.verdict(
            "small-distance frequency vanishes at all but at most one dyadic time",
            "probability bound for the small-distance event",
            true,
            "too few nonzero frequencies to fit a slope",
        );
    }
    let hit = run.envelope_hit_fraction();
    rep.verdict(
        "envelope event hit by >= 50% of replicates",
        "two comb walkers come within the small-distance envelope infinitely often",
        hit >= 0.5,
        format!("{hit:.4}"),
    );
    let above = run.above_small_radius_fraction();
    rep.verdict(
        "D_2(n_max) > n_max^(1/4 - ε) in >= 99% of replicates",
        "lower bound on the distance of two comb walkers",
        above >= 0.99,
        format!("{above:.4}"),
    );
    Ok(rep)
}

fn tails(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let spec = TailSpec {
        n: cfg.n_max,
        delta: cfg.delta,
        samples: cfg.replicates,
        seed: cfg.master_seed,
        ..TailSpec::default()
    };
    let t = tail_bound_checks(&spec)?;
    let mut rep = t.report();
    let s = spec.samples as f64;
    rep.verdict(
        "max centered partial-sum deviation frequency <= 2 exp(-λ²/(8n))",
        "maximal inequality for centered geometric sums",
        t.max_deviation_frequency <= t.max_deviation_bound,
        format!("{:.5} vs {:.5}", t.max_deviation_frequency, t.max_deviation_bound),
    );
    let sigma = (t.sum_tail_bound * (1.0 - t.sum_tail_bound) / s).sqrt();
    rep.verdict(
        "P(ΣG >= (1+δ)n) frequency <= 1/n² + 3σ",
        "tail bound for geometric sums",
        t.sum_tail_frequency <= t.sum_tail_bound + 3.0 * sigma,
        format!("frequency {:.3e}, exact {:.3e}, bound {:.3e}", t.sum_tail_frequency, t.sum_tail_exact, t.sum_tail_bound),
    );
    let tol = cfg.tolerance.unwrap_or(0.2);
    let rel = (t.local_time_slope / t.local_time_exact_slope - 1.0).abs();
    rep.verdict(
        &format!("local-time tail slope against -x²/2 within {tol} of the exact-law slope"),
        "Gaussian tail of the local time",
        rel <= tol,
        format!("{:.4} vs {:.4}", t.local_time_slope, t.local_time_exact_slope),
    );
    Ok(rep)
}

/// Ensemble summaries of freshly simulated walkers at dyadic checkpoints.
pub fn simulate(cfg: &ExperimentConfig, write: bool) -> Result<Outcome> {
    let started = Instant::now();
    let graph = cfg.graph();
    let k = cfg.k as usize;
    if k == 0 {
        return Err(crate::error::Error::TooFewWalkers { needed: 1, got: 0 });
    }
    let checkpoints = dyadic_from(1, cfg.n_max);
    let key = experiment_key(&format!("simulate/{}", graph.label()));
    let seed = cfg.master_seed;
    // per replicate: (max distance, pairwise collisions) at each checkpoint
    let rows: Vec<Vec<(f64, u64)>> = crate::lab::run_replicates(cfg.replicates, |r| {
        let mut rngs: Vec<RngStream> = (0..k as u64).map(|i| RngStream::for_walker(seed, key, i, r)).collect();
        let mut tally = CollisionTally::new(k);
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut next = 0;
        match graph {
            Graph::Comb => {
                let mut pos = vec![CombVertex::ORIGIN; k];
                for t in 1..=cfg.n_max {
                    for (p, g) in pos.iter_mut().zip(&mut rngs) {
                        *p = comb_step_direct(*p, g);
                    }
                    tally.observe(&pos);
                    if checkpoints.get(next) == Some(&t) {
                        out.push((max_pairwise_comb(&pos) as f64, tally.pairs.iter().sum::<u64>()));
                        next += 1;
                    }
                }
            }
            Graph::Zd { d } => {
                let mut pos = vec![vec![0i64; d]; k];
                for t in 1..=cfg.n_max {
                    for (p, g) in pos.iter_mut().zip(&mut rngs) {
                        let inc = zd_step(d, g).expect("d >= 1");
                        p[inc.axis] += i64::from(inc.sign);
                    }
                    tally.observe(&pos);
                    if checkpoints.get(next) == Some(&t) {
                        let mut best = 0i64;
                        for i in 0..k {
                            for j in i + 1..k {
                                best = best.max(pos[i].iter().zip(&pos[j]).map(|(a, b)| (a - b) * (a - b)).sum());
                            }
                        }
                        out.push(((best as f64).sqrt(), tally.pairs.iter().sum::<u64>()));
                        next += 1;
                    }
                }
            }
        }
        out
    });
    let mut rep = ExperimentReport::new(format!("simulate_{}_k{k}", graph.label()), seed);
    for (c, &t) in checkpoints.iter().enumerate() {
        let d: Vec<f64> = rows.iter().map(|r| r[c].0).collect();
        let p: Vec<f64> = rows.iter().map(|r| r[c].1 as f64).collect();
        rep.row(t, cfg.replicates, "max_distance_mean", mean(&d));
        rep.row(t, cfg.replicates, "max_distance_median", median(&d));
        rep.row(t, cfg.replicates, "pairwise_collisions_mean", mean(&p));
    }
    let dir = PathBuf::from(&cfg.output_dir);
    finish("simulate", vec![rep], &cfg.hash(), seed, started, write.then_some((dir.as_path(), cfg.format)))
}

/// Exact tables: the comb kernel from the origin after `horizon` steps and the
/// first-passage pmf of `level` up to `horizon`.
pub fn exact(cfg: &ExperimentConfig, write: bool) -> Result<Outcome> {
    let started = Instant::now();
    let table = comb_kernel_dp(CombVertex::ORIGIN, cfg.horizon)?;
    let mut rep = ExperimentReport::new("exact", cfg.master_seed);
    rep.row(cfg.horizon, 0, "kernel_total_mass", table.total());
    rep.row(cfg.horizon, 0, "kernel_support_radius", table.support_radius() as f64);
    rep.row(cfg.horizon, 0, "kernel_return_prob", table.prob(CombVertex::ORIGIN));
    for t in (cfg.level..=cfg.horizon).step_by(2) {
        rep.row(t, 0, &format!("hitting_pmf_r{}", cfg.level), hitting_pmf(cfg.level, t)?);
    }
    let dir = PathBuf::from(&cfg.output_dir);
    let mut outcome = finish("exact", vec![rep], &cfg.hash(), cfg.master_seed, started, write.then_some((dir.as_path(), cfg.format)))?;
    if write {
        outcome.written.push(write_file(&dir, &format!("kernel_origin_n{}.txt", cfg.horizon), &table.to_golden())?);
    }
    Ok(outcome)
}

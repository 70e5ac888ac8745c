use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::state::{Exhausted, ProcessState, SelectionMode};
use crate::rng::Rng;
use crate::triples::TripleSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub t: u64,
    pub available: u64,
    pub chosen: u64,
}

/// Available-triple counts along one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub checkpoints: Vec<Observation>,
    /// `available(t)` for every `t < completed`, when the process tracks it
    /// exactly at no extra cost (`g <= 6`); empty otherwise.
    pub per_step: Vec<u64>,
    /// Number of steps taken (`M`).
    pub completed: u64,
    pub exhausted: bool,
}

impl Trajectory {
    /// `available(t)` at a checkpoint or from the per-step record.
    pub fn available_at(&self, t: u64) -> Option<u64> {
        if let Some(&a) = self.per_step.get(t as usize) {
            return Some(a);
        }
        self.checkpoints.iter().find(|o| o.t == t).map(|o| o.available)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,available,chosen\n");
        for o in &self.checkpoints {
            out.push_str(&format!("{},{},{}\n", o.t, o.available, o.chosen));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub n: usize,
    /// Stop after this many triples; defaults to `n^2`.
    pub m_target: Option<u64>,
    pub g: usize,
    pub seed: u64,
    /// Steps at which the exact available count is recorded.
    pub checkpoints: Vec<u64>,
    pub mode: SelectionMode,
    /// Recompute every checkpoint from scratch and fail on disagreement.
    pub verify_checkpoints: bool,
}

impl ProcessConfig {
    pub fn new(n: usize, g: usize, seed: u64) -> Self {
        ProcessConfig {
            n,
            m_target: None,
            g,
            seed,
            checkpoints: default_checkpoints(n),
            mode: SelectionMode::Rejection,
            verify_checkpoints: false,
        }
    }
}

/// About 30 geometrically spaced steps in `[1, n^2]`, plus 0.
pub fn default_checkpoints(n: usize) -> Vec<u64> {
    let top = (n * n) as f64;
    let mut v: Vec<u64> = (0..30).map(|i| top.powf(i as f64 / 29.0).round() as u64).collect();
    v.insert(0, 0);
    v.dedup();
    v
}

pub struct ProcessRun {
    pub system: TripleSystem,
    pub trajectory: Trajectory,
    /// Times the rejection sampler fell back to enumeration.
    pub fallbacks: u64,
}

pub fn run_process(config: &ProcessConfig) -> Result<ProcessRun> {
    let st = ProcessState::new(config.n, config.g, config.seed, config.mode)?;
    drive(st, config)
}

/// As [`run_process`] but with a caller-supplied generator.
pub fn run_process_with_rng(config: &ProcessConfig, rng: Rng) -> Result<ProcessRun> {
    let st = ProcessState::with_rng(config.n, config.g, rng, config.mode)?;
    drive(st, config)
}

fn drive(mut st: ProcessState, config: &ProcessConfig) -> Result<ProcessRun> {
    let n = config.n;
    let m = config.m_target.unwrap_or((n * n) as u64);
    if m > (n * n) as u64 {
        return Err(Error::OutOfRange(format!("target {m} exceeds n^2 = {}", n * n)));
    }
    let mut checkpoints = config.checkpoints.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let mut next_cp = checkpoints.iter().peekable();
    let cheap = config.g <= 6;
    let mut tr = Trajectory { n, ..Default::default() };
    loop {
        let t = st.t();
        while next_cp.peek().is_some_and(|&&c| c < t) {
            next_cp.next();
        }
        let at_cp = next_cp.peek().is_some_and(|&&c| c == t);
        if cheap || at_cp {
            let a = st.available_count();
            if at_cp {
                if config.verify_checkpoints {
                    let b = st.recount_available();
                    if a != b {
                        return Err(Error::Precondition(format!("checkpoint t={t}: maintained {a}, recount {b}")));
                    }
                }
                tr.checkpoints.push(Observation { t, available: a, chosen: t });
            }
            if cheap && t < m && a > 0 {
                tr.per_step.push(a);
            }
        }
        if t >= m {
            break;
        }
        match st.trp_step() {
            Ok(_) => {}
            Err(Exhausted) => {
                tr.exhausted = true;
                break;
            }
        }
    }
    tr.completed = st.t();
    if tr.checkpoints.last().is_none_or(|o| o.t != tr.completed) {
        let a = st.available_count();
        tr.checkpoints.push(Observation { t: tr.completed, available: a, chosen: tr.completed });
    }
    Ok(ProcessRun { system: st.to_triple_system(), trajectory: tr, fallbacks: st.fallbacks() })
}

/// `A(t) = N^3 (1 - t/N^2)^3 exp(-t^3/N^6)`.
pub fn a_of_t(n: usize, t: f64) -> f64 {
    let n2 = (n * n) as f64;
    let x = t / n2;
    n2 * n as f64 * (1.0 - x).powi(3) * (-x.powi(3)).exp()
}

/// `N^3 (1 - t/N^2)^3`, the profile without the girth factor.
pub fn unconstrained_profile(n: usize, t: f64) -> f64 {
    let n2 = (n * n) as f64;
    n2 * n as f64 * (1.0 - t / n2).powi(3)
}

/// `3 log N - 13/4`, from `integral_0^1 log((1-x)^3 e^{-x^3}) dx = -13/4`.
pub fn analytic_log_count(n: usize) -> f64 {
    3.0 * (n as f64).ln() - 13.0 / 4.0
}

/// `(1/N^2) sum_{t < M} log A(t)`, the analytic value over the same range.
pub fn analytic_partial(n: usize, m: u64) -> f64 {
    let s: f64 = (0..m).map(|t| a_of_t(n, t as f64).max(1.0).ln()).sum();
    s / (n * n) as f64
}

/// `(1/N^2) sum_{t < M} log available(t)`. Without a per-step record,
/// `log available` is interpolated linearly between checkpoints.
pub fn log_count_estimate(tr: &Trajectory) -> Result<f64> {
    if tr.completed == 0 || tr.checkpoints.is_empty() && tr.per_step.is_empty() {
        return Err(Error::Precondition("empty trajectory".into()));
    }
    let n2 = (tr.n * tr.n) as f64;
    if tr.per_step.len() as u64 >= tr.completed {
        let s: f64 = tr.per_step[..tr.completed as usize].iter().map(|&a| (a as f64).ln()).sum();
        return Ok(s / n2);
    }
    let pts: Vec<(f64, f64)> =
        tr.checkpoints.iter().map(|o| (o.t as f64, (o.available.max(1) as f64).ln())).collect();
    if pts.first().is_none_or(|p| p.0 > 0.0) {
        return Err(Error::Precondition("interpolation needs a checkpoint at t = 0".into()));
    }
    let mut s = 0.0;
    let mut k = 0;
    for t in 0..tr.completed {
        let t = t as f64;
        while k + 1 < pts.len() && pts[k + 1].0 <= t {
            k += 1;
        }
        let v = if k + 1 < pts.len() {
            let (t0, y0) = pts[k];
            let (t1, y1) = pts[k + 1];
            y0 + (y1 - y0) * (t - t0) / (t1 - t0)
        } else {
            pts[k].1
        };
        s += v;
    }
    Ok(s / n2)
}

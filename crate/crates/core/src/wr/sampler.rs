//! Single-site heat-bath dynamics for the uniform measure on admissible
//! interiors under a fixed boundary.
//!
//! Each site keeps counters of nearby nonzero, plus and minus symbols, so a
//! visit costs O(1) and only actual changes pay for the `(2R₂+1)²` update.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{Coord, Pattern, Symbol};
use crate::sft::{is_locally_admissible, BoundaryCondition};

use super::ensemble::interior_shape;
use super::{boundary, wr_rules, Board, BoundaryKind, WrError, WrParams, MINUS, PLUS, ZERO};

/// Per-sweep statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub sweep: usize,
    pub plus_density: f64,
    pub minus_density: f64,
    pub center_symbol: String,
}

#[derive(Debug, Clone)]
pub struct SampleRun {
    /// Final interior configuration.
    pub config: Pattern,
    pub trace: Vec<TraceRow>,
    /// Visits of each interior state after burn-in, when requested.
    pub state_counts: Option<HashMap<Vec<Symbol>, u64>>,
    /// Center indicators (`-` and `+`) for each post-burn-in sweep.
    pub center_minus: Vec<bool>,
    pub center_plus: Vec<bool>,
}

/// Mean of a 0/1 sequence with two error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventEstimate {
    pub mean: f64,
    /// Binomial standard error, valid for independent samples.
    pub stderr: f64,
    /// Batched-means standard error, which absorbs autocorrelation.
    pub batch_stderr: f64,
    pub samples: usize,
}

impl EventEstimate {
    pub const BATCHES: usize = 20;

    pub fn from_indicators(xs: &[bool]) -> EventEstimate {
        let n = xs.len();
        if n == 0 {
            return EventEstimate {
                mean: 0.0,
                stderr: 0.0,
                batch_stderr: 0.0,
                samples: 0,
            };
        }
        let mean = xs.iter().filter(|&&b| b).count() as f64 / n as f64;
        let stderr = (mean * (1.0 - mean) / n as f64).sqrt();
        let b = Self::BATCHES.min(n);
        let size = n / b;
        let means: Vec<f64> = (0..b)
            .map(|i| {
                let chunk = &xs[i * size..(i + 1) * size];
                chunk.iter().filter(|&&x| x).count() as f64 / size as f64
            })
            .collect();
        EventEstimate {
            mean,
            stderr,
            batch_stderr: mean_and_stderr(&means).1,
            samples: n,
        }
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Fraction of `samples` with `-` at `v`.
pub fn estimate_minus_event(samples: &[Pattern], v: Coord) -> Result<EventEstimate, WrError> {
    let xs: Result<Vec<bool>, _> = samples.iter().map(|p| p.get(v).map(|s| s == MINUS)).collect();
    Ok(EventEstimate::from_indicators(
        &xs.map_err(crate::sft::SftError::from)?,
    ))
}

struct Chain {
    board: Board,
    p: WrParams,
    vals: Vec<u8>,
    nz_r1: Vec<u16>,
    plus_r2: Vec<u16>,
    minus_r2: Vec<u16>,
    interior: Vec<usize>,
    plus: usize,
    minus: usize,
}

impl Chain {
    fn new(k: i32, p: WrParams, bc: Option<&BoundaryCondition>) -> Self {
        let board = Board::new(k);
        let n = board.len();
        let interior: Vec<usize> = interior_shape(k).iter().map(|c| board.idx(c)).collect();
        let mut ch = Chain {
            board,
            p,
            vals: vec![0; n],
            nz_r1: vec![0; n],
            plus_r2: vec![0; n],
            minus_r2: vec![0; n],
            interior,
            plus: 0,
            minus: 0,
        };
        if let Some(bc) = bc {
            for (c, s) in bc.fixed.iter() {
                if board.contains(c) && s != ZERO {
                    ch.apply(board.idx(c), s.0 as u8, 1);
                }
            }
        }
        ch
    }

    fn apply(&mut self, i: usize, s: u8, delta: i32) {
        let c = self.board.coord(i);
        let k = self.board.k;
        let r2 = self.p.r2 as i32;
        let r1 = self.p.r1 as i32;
        for y in (c.y - r2).max(-k)..=(c.y + r2).min(k) {
            for x in (c.x - r2).max(-k)..=(c.x + r2).min(k) {
                if x == c.x && y == c.y {
                    continue;
                }
                let t = self.board.idx(Coord::new(x, y));
                if (x - c.x).abs() <= r1 && (y - c.y).abs() <= r1 {
                    self.nz_r1[t] = (self.nz_r1[t] as i32 + delta) as u16;
                }
                let ctr = if s == PLUS.0 as u8 {
                    &mut self.plus_r2[t]
                } else {
                    &mut self.minus_r2[t]
                };
                *ctr = (*ctr as i32 + delta) as u16;
            }
        }
        self.vals[i] = if delta > 0 { s } else { 0 };
    }

    fn set(&mut self, i: usize, s: u8) {
        let old = self.vals[i];
        if old == s {
            return;
        }
        if old != 0 {
            self.apply(i, old, -1);
            if old == PLUS.0 as u8 {
                self.plus -= 1;
            } else {
                self.minus -= 1;
            }
        }
        if s != 0 {
            self.apply(i, s, 1);
            if s == PLUS.0 as u8 {
                self.plus += 1;
            } else {
                self.minus += 1;
            }
        }
    }

    fn heat_bath(&mut self, i: usize, rng: &mut ChaCha8Rng) {
        let mut opts = [0u8; 3];
        let mut n = 1;
        if self.nz_r1[i] == 0 {
            if self.minus_r2[i] == 0 {
                opts[n] = PLUS.0 as u8;
                n += 1;
            }
            if self.plus_r2[i] == 0 {
                opts[n] = MINUS.0 as u8;
                n += 1;
            }
        }
        let s = if n == 1 { 0 } else { opts[rng.gen_range(0..n)] };
        self.set(i, s);
    }

    fn interior_pattern(&self) -> Pattern {
        let shape = interior_shape(self.board.k);
        Pattern::from_fn(shape, |c| Symbol(self.vals[self.board.idx(c)] as u32))
    }

    fn symbol_at(&self, c: Coord) -> Symbol {
        Symbol(self.vals[self.board.idx(c)] as u32)
    }
}

/// Runs `sweeps` heat-bath sweeps from the all-zero interior.
///
/// `burn_in` sweeps are excluded from the center indicators and state counts.
pub fn heat_bath_sample(
    k: i32,
    p: WrParams,
    bc: Option<&BoundaryCondition>,
    sweeps: usize,
    burn_in: usize,
    seed: u64,
    record_states: bool,
) -> Result<SampleRun, WrError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_chain(k, p, bc, sweeps, burn_in, &mut rng, record_states)
}

fn run_chain(
    k: i32,
    p: WrParams,
    bc: Option<&BoundaryCondition>,
    sweeps: usize,
    burn_in: usize,
    rng: &mut ChaCha8Rng,
    record_states: bool,
) -> Result<SampleRun, WrError> {
    if k < 1 {
        return Err(WrError::InvalidParams("k must be at least 1".into()));
    }
    if let Some(bc) = bc {
        if !is_locally_admissible(&bc.fixed, &wr_rules(p))? {
            return Err(WrError::InfeasibleBoundary);
        }
    }
    let mut ch = Chain::new(k, p, bc);
    let mut order = ch.interior.clone();
    let area = order.len() as f64;
    let alphabet = super::wr_alphabet();
    let mut trace = Vec::with_capacity(sweeps);
    let mut counts: Option<HashMap<Vec<Symbol>, u64>> = record_states.then(HashMap::new);
    let mut center_minus = Vec::with_capacity(sweeps.saturating_sub(burn_in));
    let mut center_plus = Vec::with_capacity(sweeps.saturating_sub(burn_in));
    for sweep in 1..=sweeps {
        order.shuffle(rng);
        for &i in &order {
            ch.heat_bath(i, rng);
        }
        let center = ch.symbol_at(Coord::ORIGIN);
        trace.push(TraceRow {
            sweep,
            plus_density: ch.plus as f64 / area,
            minus_density: ch.minus as f64 / area,
            center_symbol: alphabet.name(center).unwrap().to_string(),
        });
        if sweep > burn_in {
            center_minus.push(center == MINUS);
            center_plus.push(center == PLUS);
            if let Some(c) = counts.as_mut() {
                let key: Vec<Symbol> = ch.interior.iter().map(|&i| Symbol(ch.vals[i] as u32)).collect();
                *c.entry(key).or_default() += 1;
            }
        }
    }
    Ok(SampleRun {
        config: ch.interior_pattern(),
        trace,
        state_counts: counts,
        center_minus,
        center_plus,
    })
}

/// Parameters for a batch of independent chains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub k: i32,
    pub params: WrParams,
    pub boundary: BoundaryKind,
    pub sweeps: usize,
    pub burn_in: usize,
    pub chains: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSummary {
    pub stream: u64,
    pub center_minus: EventEstimate,
    pub center_plus: EventEstimate,
    pub final_plus_density: f64,
    pub final_minus_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiChainReport {
    pub chains: Vec<ChainSummary>,
    /// Mean over chains, with the standard error of the chain means.
    pub minus_at_center: (f64, f64),
    pub plus_at_center: (f64, f64),
    #[serde(skip)]
    pub trace_of_first: Vec<TraceRow>,
}

/// Runs independent chains in parallel; chain `i` uses stream `i` of the master seed.
pub fn run_chains(cfg: &SamplerConfig) -> Result<MultiChainReport, WrError> {
    let bc = boundary(cfg.boundary, cfg.k, cfg.params.r1)?;
    let runs: Vec<Result<(ChainSummary, Vec<TraceRow>), WrError>> = (0..cfg.chains as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream);
            let run = run_chain(
                cfg.k,
                cfg.params,
                bc.as_ref(),
                cfg.sweeps,
                cfg.burn_in,
                &mut rng,
                false,
            )?;
            let last = run.trace.last();
            let summary = ChainSummary {
                stream,
                center_minus: EventEstimate::from_indicators(&run.center_minus),
                center_plus: EventEstimate::from_indicators(&run.center_plus),
                final_plus_density: last.map_or(0.0, |t| t.plus_density),
                final_minus_density: last.map_or(0.0, |t| t.minus_density),
            };
            Ok((summary, if stream == 0 { run.trace } else { Vec::new() }))
        })
        .collect();
    let mut chains = Vec::with_capacity(runs.len());
    let mut trace_of_first = Vec::new();
    for r in runs {
        let (s, t) = r?;
        if s.stream == 0 {
            trace_of_first = t;
        }
        chains.push(s);
    }
    let minus: Vec<f64> = chains.iter().map(|c| c.center_minus.mean).collect();
    let plus: Vec<f64> = chains.iter().map(|c| c.center_plus.mean).collect();
    Ok(MultiChainReport {
        minus_at_center: mean_and_stderr(&minus),
        plus_at_center: mean_and_stderr(&plus),
        chains,
        trace_of_first,
    })
}

//! Suite dispatch. Each (suite, r) cell is independent and runs on the rayon
//! pool; cells are merged back in canonical order.

use std::time::Instant;

use clap::ValueEnum;
use flopgw::verify::{self, Check, Report};
use rayon::prelude::*;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Appendix,
    Flop,
    Batyrev,
    Cohomology,
    Quantization,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] = [Suite::Appendix, Suite::Flop, Suite::Batyrev, Suite::Cohomology, Suite::Quantization];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Flop => "flop",
            Suite::Batyrev => "batyrev",
            Suite::Cohomology => "cohomology",
            Suite::Quantization => "quantization",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Suite::CONCRETE.to_vec()
        } else {
            vec![self]
        }
    }

    fn per_r(self) -> bool {
        self != Suite::Quantization
    }
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    suite: Suite,
    r: Option<u32>,
}

fn cells(suite: Suite, cfg: &RunConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for s in suite.expand() {
        if s.per_r() {
            out.extend(cfg.r.iter().map(|&r| Cell { suite: s, r: Some(r) }));
        } else {
            out.push(Cell { suite: s, r: None });
        }
    }
    out
}

fn run_cell(cell: Cell, cfg: &RunConfig) -> Vec<Check> {
    let r = cell.r.unwrap_or(0);
    let mut checks = match cell.suite {
        Suite::Appendix => verify::appendix_checks(r, cfg.rmatrix_order, cfg.dmax),
        Suite::Flop => verify::flop_checks(r, cfg.max_m, cfg.max_n, cfg.order as usize, true),
        Suite::Batyrev => verify::batyrev_checks(r, cfg.order, &cfg.sample, cfg.gap_tolerance, cfg.tolerance),
        Suite::Cohomology => verify::cohomology_checks(r),
        Suite::Quantization => verify::quantization_checks(cfg.dim, cfg.cutoff),
        Suite::All => unreachable!("expanded before dispatch"),
    };
    for c in &mut checks {
        c.params.insert("suite".into(), cell.suite.name().into());
    }
    checks
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Report {
    let start = Instant::now();
    let results: Vec<Vec<Check>> = cells(suite, cfg).into_par_iter().map(|cell| run_cell(cell, cfg)).collect();
    let mut report = Report::new(suite.name());
    report.extend(results.into_iter().flatten());
    if cfg.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Opts;

    #[test]
    fn cells_in_canonical_order() {
        let cfg = RunConfig::resolve(&Opts { r: Some("1..2".into()), ..Default::default() }).unwrap();
        let got: Vec<(Suite, Option<u32>)> = cells(Suite::All, &cfg).iter().map(|c| (c.suite, c.r)).collect();
        assert_eq!(got.len(), 9);
        assert_eq!(got[0], (Suite::Appendix, Some(1)));
        assert_eq!(got[1], (Suite::Appendix, Some(2)));
        assert_eq!(got[8], (Suite::Quantization, None));
    }

    #[test]
    fn cohomology_runs_deterministically() {
        let cfg = RunConfig::resolve(&Opts { r: Some("1..2".into()), no_timing: true, ..Default::default() }).unwrap();
        let a = run_suite(Suite::Cohomology, &cfg);
        let b = run_suite(Suite::Cohomology, &cfg);
        assert!(a.passed());
        assert_eq!(a, b);
        assert!(a.entries.iter().all(|c| c.params["suite"] == "cohomology"));
    }
}

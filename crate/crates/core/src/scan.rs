//! Parameter sweeps over the mixed one-way family.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::bell::{chsh_value, ChshVariant};
use crate::classify::{membership, HierarchyClass};
use crate::constructors::{p_eps_alpha, EpsParams};
use crate::error::{Error, Result};
use crate::wiring::{wire_2to3, wire_3to2};

pub const CSV_HEADER: [&str; 11] = [
    "eps",
    "alpha",
    "chsh_2to3",
    "chsh_3to2",
    "in_fl",
    "in_nsbl",
    "in_tobl",
    "in_atobl_left",
    "in_atobl_right",
    "in_hull",
    "in_bl",
];

/// Closed range `[start, end]` sampled at `start + k * step`; the end point
/// is appended when the steps do not land on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        if !in_unit(start) || !in_unit(end) || start > end {
            return Err(Error::InvalidParameter(format!(
                "range [{start}, {end}] must lie in [0, 1] with start <= end"
            )));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter(format!("step {step} must be positive")));
        }
        Ok(Self { start, end, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        let mut pts: Vec<f64> =
            (0..=n).map(|k| round12(self.start + k as f64 * self.step).min(self.end)).collect();
        if *pts.last().unwrap() < self.end - 1e-12 {
            pts.push(self.end);
        }
        pts
    }
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub eps: f64,
    pub alpha: f64,
    pub chsh_2to3: f64,
    pub chsh_3to2: f64,
    pub in_fl: Option<bool>,
    pub in_nsbl: Option<bool>,
    pub in_tobl: Option<bool>,
    pub in_atobl_left: Option<bool>,
    pub in_atobl_right: Option<bool>,
    pub in_hull: Option<bool>,
    pub in_bl: Option<bool>,
}

impl ScanRecord {
    /// Checks every inclusion between the computed columns.
    pub fn check_monotone(&self) -> Result<()> {
        let chain = [
            ("FL", self.in_fl, "NSBL", self.in_nsbl),
            ("NSBL", self.in_nsbl, "TOBL", self.in_tobl),
            ("NSBL", self.in_nsbl, "ATOBL_LEFT", self.in_atobl_left),
            ("NSBL", self.in_nsbl, "ATOBL_RIGHT", self.in_atobl_right),
            ("TOBL", self.in_tobl, "ATOBL_LEFT", self.in_atobl_left),
            ("TOBL", self.in_tobl, "ATOBL_RIGHT", self.in_atobl_right),
            ("ATOBL_LEFT", self.in_atobl_left, "ATOBL_HULL", self.in_hull),
            ("ATOBL_RIGHT", self.in_atobl_right, "ATOBL_HULL", self.in_hull),
            ("ATOBL_HULL", self.in_hull, "BL", self.in_bl),
        ];
        for (a, sub, b, sup) in chain {
            if sub == Some(true) && sup == Some(false) {
                return Err(Error::HierarchyInconsistency(format!(
                    "eps={}, alpha={}: In {a} but Out {b}",
                    self.eps, self.alpha
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub eps: GridRange,
    pub alpha: GridRange,
    /// FL, NSBL, ATOBL_LEFT/RIGHT, hull and BL columns.
    pub with_lp: bool,
    pub with_tobl: bool,
    pub tol: f64,
}

pub fn scan_point(eps: f64, alpha: f64, cfg: &ScanConfig) -> Result<ScanRecord> {
    let b = p_eps_alpha(&EpsParams::new(eps)?, alpha)?;
    let check = |c: HierarchyClass, on: bool| -> Result<Option<bool>> {
        Ok(if on { Some(membership(&b, c, cfg.tol)?.is_in()) } else { None })
    };
    let rec = ScanRecord {
        eps,
        alpha,
        chsh_2to3: chsh_value(&wire_2to3(&b), ChshVariant::CANONICAL),
        chsh_3to2: chsh_value(&wire_3to2(&b), ChshVariant::CANONICAL),
        in_fl: check(HierarchyClass::Fl, cfg.with_lp)?,
        in_nsbl: check(HierarchyClass::Nsbl, cfg.with_lp)?,
        in_tobl: check(HierarchyClass::Tobl, cfg.with_tobl)?,
        in_atobl_left: check(HierarchyClass::AtoblLeft, cfg.with_lp)?,
        in_atobl_right: check(HierarchyClass::AtoblRight, cfg.with_lp)?,
        in_hull: check(HierarchyClass::AtoblHull, cfg.with_lp)?,
        in_bl: check(HierarchyClass::Bl, cfg.with_lp)?,
    };
    rec.check_monotone()?;
    Ok(rec)
}

/// Evaluates the grid (eps outer, alpha inner). Points run in parallel; the
/// output order is the grid order.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let grid: Vec<(f64, f64)> = cfg
        .eps
        .points()
        .into_iter()
        .flat_map(|e| cfg.alpha.points().into_iter().map(move |a| (e, a)))
        .collect();
    grid.par_iter().map(|&(e, a)| scan_point(e, a, cfg)).collect()
}

fn fmt_num(v: f64) -> String {
    let r = round12(v);
    // avoid "-0"
    if r == 0.0 { "0".to_string() } else { r.to_string() }
}

fn fmt_flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            fmt_num(r.eps),
            fmt_num(r.alpha),
            fmt_num(r.chsh_2to3),
            fmt_num(r.chsh_3to2),
            fmt_flag(r.in_fl),
            fmt_flag(r.in_nsbl),
            fmt_flag(r.in_tobl),
            fmt_flag(r.in_atobl_left),
            fmt_flag(r.in_atobl_right),
            fmt_flag(r.in_hull),
            fmt_flag(r.in_bl),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_multiples_and_clamps_end() {
        let g = GridRange::new(0.0, 1.0, 0.1).unwrap().points();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(*g.last().unwrap(), 1.0);
        let g = GridRange::new(0.0, 1.0, 0.3).unwrap().points();
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.9, 1.0]);
        let g = GridRange::new(0.5, 0.5, 0.1).unwrap().points();
        assert_eq!(g, vec![0.5]);
    }

    #[test]
    fn bad_ranges() {
        assert!(GridRange::new(0.0, 1.5, 0.1).is_err());
        assert!(GridRange::new(0.6, 0.5, 0.1).is_err());
        assert!(GridRange::new(0.0, 1.0, 0.0).is_err());
        assert!(GridRange::new(-0.1, 1.0, 0.1).is_err());
    }

    #[test]
    fn chsh_columns_follow_closed_forms() {
        let cfg = ScanConfig {
            eps: GridRange::new(0.8, 0.8, 0.1).unwrap(),
            alpha: GridRange::new(0.5, 0.5, 0.1).unwrap(),
            with_lp: false,
            with_tobl: false,
            tol: 1e-9,
        };
        let r = run_scan(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].chsh_2to3 - 2.1).abs() < 1e-12);
        assert!((r[0].chsh_3to2 - 2.1).abs() < 1e-12);
        assert_eq!(r[0].in_fl, None);
    }

    #[test]
    fn csv_layout() {
        let rec = ScanRecord {
            eps: 0.0,
            alpha: 0.0,
            chsh_2to3: 1.0,
            chsh_3to2: -0.0,
            in_fl: Some(true),
            in_nsbl: None,
            in_tobl: None,
            in_atobl_left: Some(false),
            in_atobl_right: None,
            in_hull: None,
            in_bl: None,
        };
        let mut buf = Vec::new();
        write_csv(&[rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "0,0,1,0,true,,,false,,,");
    }
}

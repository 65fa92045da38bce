use std::collections::BTreeMap;
use std::fmt::Write;

use crate::run::{mean_and_se, CsvRow};

#[derive(Debug, Default)]
struct Group {
    rows: usize,
    ratios: Vec<f64>,
    lb_ratios: Vec<f64>,
    factor: f64,
    passed: usize,
    failed: usize,
    randomized: bool,
    /// Randomized rows: trial ratios per instance.
    per_instance: BTreeMap<String, Vec<f64>>,
}

fn stats(xs: &[f64]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    let max = xs.iter().copied().fold(f64::MIN, f64::max);
    let (mean, se) = mean_and_se(xs);
    if xs.len() == 1 {
        format!("{mean:.4}")
    } else {
        format!("mean {mean:.4} (se {se:.4}) max {max:.4}")
    }
}

/// Summary per model, then per algorithm (muwp, offline, grid): empirical
/// ratios against the optimum where one is known, otherwise against the
/// trivial lower bound, next to the competitive factor and the bound checks.
pub fn report(rows: &[CsvRow]) -> String {
    let mut groups: BTreeMap<(String, String, String, String), Group> = BTreeMap::new();
    for r in rows {
        let g = groups
            .entry((
                r.model.clone(),
                r.muwp.clone(),
                r.offline.clone(),
                r.grid.clone(),
            ))
            .or_default();
        g.rows += 1;
        g.factor = r.factor;
        g.randomized = r.grid == "rand";
        if let Some(x) = r.empirical_ratio {
            g.ratios.push(x);
            if g.randomized {
                g.per_instance
                    .entry(r.instance_id.clone())
                    .or_default()
                    .push(x);
            }
        }
        if let Some(x) = r.lb_ratio {
            g.lb_ratios.push(x);
        }
        match r.bound_pass {
            Some(true) => g.passed += 1,
            Some(false) => g.failed += 1,
            None => {}
        }
    }

    let mut out = String::new();
    let mut model = None;
    for ((m, muwp, offline, grid), g) in &groups {
        if model != Some(m) {
            if model.is_some() {
                out.push('\n');
            }
            writeln!(out, "== {m} ==").unwrap();
            model = Some(m);
        }
        writeln!(
            out,
            "{muwp} + {offline}, {grid} grid: {} rows, factor {:.4}",
            g.rows, g.factor
        )
        .unwrap();
        writeln!(out, "  ratio to optimum: {}", stats(&g.ratios)).unwrap();
        if !g.lb_ratios.is_empty() {
            writeln!(out, "  ratio to lower bound: {}", stats(&g.lb_ratios)).unwrap();
        }
        if g.randomized && !g.per_instance.is_empty() {
            let means: Vec<f64> = g.per_instance.values().map(|v| mean_and_se(v).0).collect();
            writeln!(
                out,
                "  trial means over {} instances: {}",
                means.len(),
                stats(&means)
            )
            .unwrap();
        }
        let max = g.ratios.iter().copied().fold(f64::MIN, f64::max);
        let within = if g.ratios.is_empty() {
            "n/a".to_string()
        } else {
            (max <= g.factor).to_string()
        };
        writeln!(
            out,
            "  bound checks: {} passed, {} failed; max ratio within factor: {within}",
            g.passed, g.failed
        )
        .unwrap();
    }
    if out.is_empty() {
        out.push_str("no rows\n");
    }
    out
}

use std::fmt::Write;

use anyhow::Result;
use owct_core::model::{fmt_rational, Instance, Rational};
use owct_core::offline::{dp_optimal_cos, DP_CAP};
use owct_core::oracle::{
    brute_cluster_makespan, brute_mswp, brute_opt_perm_cluster, brute_opt_perm_cos, lemma5_check,
    MSWP_CAP, PERM_CAP,
};

fn order(v: &[usize]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Brute-force reference values for one instance; `deadline` adds the
/// scheduled weight oracles.
pub fn oracle_report(inst: &Instance, deadline: Option<&Rational>) -> Result<String> {
    let mut out = String::new();
    let n = inst.n();
    let all: Vec<usize> = (0..n).collect();
    writeln!(out, "model {} jobs {n}", inst.model())?;
    writeln!(
        out,
        "lower bound {}",
        fmt_rational(&inst.trivial_lower_bound())
    )?;
    match inst {
        Instance::Cluster(c) => {
            if n <= PERM_CAP {
                let (o, v) = brute_opt_perm_cluster(c, false)?;
                writeln!(
                    out,
                    "best list order without releases {} : {}",
                    fmt_rational(&v),
                    order(&o)
                )?;
                let (o, v) = brute_opt_perm_cluster(c, true)?;
                writeln!(
                    out,
                    "best list order with releases {} : {}",
                    fmt_rational(&v),
                    order(&o)
                )?;
            }
            match brute_cluster_makespan(c, &all) {
                Ok(v) => writeln!(out, "minimum makespan {}", fmt_rational(&v))?,
                Err(e) => writeln!(out, "minimum makespan skipped: {e}")?,
            }
        }
        _ => {
            let cos = inst.cos_view().expect("not a cluster");
            if n <= DP_CAP {
                let (o, v) = dp_optimal_cos(&cos, &all)?;
                writeln!(
                    out,
                    "optimum without releases {} : {}",
                    fmt_rational(&v),
                    order(o.as_slice())
                )?;
            }
            if n <= PERM_CAP {
                let (o, v) = brute_opt_perm_cos(&cos, true)?;
                writeln!(
                    out,
                    "best permutation with releases {} : {}",
                    fmt_rational(&v),
                    order(&o)
                )?;
            }
            if let Some(d) = deadline {
                if n <= MSWP_CAP {
                    let (s, w) = brute_mswp(&cos, &all, d)?;
                    writeln!(
                        out,
                        "max scheduled weight by {} : {} : {}",
                        fmt_rational(d),
                        fmt_rational(&w),
                        order(&s)
                    )?;
                }
                if let Instance::Coflow(f) = inst {
                    match lemma5_check(f, d) {
                        Ok(r) => writeln!(
                            out,
                            "unscheduled weight on the switch {}, on the reduction {}, reduction no worse: {}",
                            fmt_rational(&r.coflow_optimum),
                            fmt_rational(&r.reduced_optimum),
                            r.pass
                        )?,
                        Err(e) => writeln!(out, "reduction check skipped: {e}")?,
                    }
                }
            }
        }
    }
    Ok(out)
}

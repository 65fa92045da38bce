//! Whitespace-separated instance files.
//!
//! ```text
//! COS n m            COFLOW n m             CC n m
//! w_1 .. w_n         w_1 .. w_n             w_1 .. w_n
//! r_1 .. r_n         r_1 .. r_n             r_1 .. r_n
//! p_11 .. p_1n       (m rows of m entries)  m_1 .. m_m
//! ...  (m rows)      ... for every coflow   t p_1 .. p_t   (one line per job and cluster)
//! ```
//!
//! Numbers are integers, decimals (`2.5`) or fractions (`5/2`). Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use num::{BigInt, Signed, Zero};

use super::{fmt_rational, ClusterInstance, CoflowInstance, CosInstance, Instance, Rational};
use crate::error::{Error, Result};

pub fn parse_rational(tok: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("`{tok}` is not a number");
    if let Some((a, b)) = tok.split_once('/') {
        let a: BigInt = a.parse().map_err(|_| bad())?;
        let b: BigInt = b.parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(format!("`{tok}` has a zero denominator"));
        }
        return Ok(Rational::new(a, b));
    }
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num::pow(BigInt::from(10u32), frac_part.len());
    let v = Rational::new(numer, denom);
    Ok(if neg { -v } else { v })
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.last,
            msg: msg.into(),
        }
    }

    fn next_tokens(&mut self, what: &str) -> Result<Vec<&'a str>> {
        for (idx, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            self.last = idx + 1;
            return Ok(t.split_whitespace().collect());
        }
        self.last += 1;
        Err(self.err(format!("unexpected end of input, expected {what}")))
    }

    fn numbers(&mut self, count: usize, what: &str) -> Result<Vec<Rational>> {
        let toks = self.next_tokens(what)?;
        if toks.len() != count {
            return Err(self.err(format!(
                "expected {count} values for {what}, found {}",
                toks.len()
            )));
        }
        toks.iter()
            .map(|t| {
                let v = parse_rational(t).map_err(|e| self.err(e))?;
                if v.is_negative() {
                    return Err(self.err(format!("{what} must be nonnegative, found {t}")));
                }
                Ok(v)
            })
            .collect()
    }

    fn integers(&mut self, count: usize, what: &str) -> Result<Vec<u64>> {
        let toks = self.next_tokens(what)?;
        if toks.len() != count {
            return Err(self.err(format!(
                "expected {count} values for {what}, found {}",
                toks.len()
            )));
        }
        toks.iter()
            .map(|t| {
                t.parse::<u64>().map_err(|_| {
                    self.err(format!("{what} must be a nonnegative integer, found `{t}`"))
                })
            })
            .collect()
    }

    fn finish(&mut self) -> Result<()> {
        for (idx, line) in self.inner.by_ref() {
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                self.last = idx + 1;
                return Err(self.err(format!("trailing content `{t}`")));
            }
        }
        Ok(())
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let header = lines.next_tokens("a header line")?;
    if header.len() != 3 {
        return Err(lines.err("header must be `<KIND> n m`"));
    }
    let n: usize = header[1]
        .parse()
        .map_err(|_| lines.err(format!("bad job count `{}`", header[1])))?;
    let m: usize = header[2]
        .parse()
        .map_err(|_| lines.err(format!("bad machine count `{}`", header[2])))?;
    let kind = header[0];
    if !matches!(kind, "COS" | "COFLOW" | "CC") {
        return Err(lines.err(format!("unknown instance kind `{kind}`")));
    }
    let weights = lines.numbers(n, "weights")?;
    let releases = lines.numbers(n, "release times")?;
    let inst: Instance = match kind {
        "COS" => {
            let mut processing = Vec::with_capacity(m);
            for i in 0..m {
                processing
                    .push(lines.numbers(n, &format!("processing times of machine {}", i + 1))?);
            }
            CosInstance::new(processing, releases, weights)?.into()
        }
        "COFLOW" => {
            let mut demand = Vec::with_capacity(n);
            for j in 0..n {
                let mut matrix = Vec::with_capacity(m);
                for i in 0..m {
                    matrix.push(
                        lines.integers(m, &format!("demand row {} of coflow {}", i + 1, j + 1))?,
                    );
                }
                demand.push(matrix);
            }
            CoflowInstance::new(m, demand, releases, weights)?.into()
        }
        _ => {
            let sizes: Vec<usize> = lines
                .integers(m, "cluster sizes")?
                .into_iter()
                .map(|s| s as usize)
                .collect();
            if sizes.contains(&0) {
                return Err(lines.err("cluster sizes must be at least 1"));
            }
            let mut tasks = Vec::with_capacity(n);
            for j in 0..n {
                let mut per_cluster = Vec::with_capacity(m);
                for i in 0..m {
                    let what = format!("tasks of job {} on cluster {}", j + 1, i + 1);
                    let toks = lines.next_tokens(&what)?;
                    let count: usize = toks[0]
                        .parse()
                        .map_err(|_| lines.err(format!("bad task count `{}`", toks[0])))?;
                    if toks.len() != count + 1 {
                        return Err(lines.err(format!(
                            "{what}: count says {count} but {} durations follow",
                            toks.len() - 1
                        )));
                    }
                    let durations = toks[1..]
                        .iter()
                        .map(|t| {
                            let v = parse_rational(t).map_err(|e| lines.err(e))?;
                            if v.is_negative() {
                                return Err(lines.err(format!("negative task duration {t}")));
                            }
                            Ok(v)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    per_cluster.push(durations);
                }
                tasks.push(per_cluster);
            }
            ClusterInstance::new(sizes, tasks, releases, weights)?.into()
        }
    };
    lines.finish()?;
    Ok(inst)
}

fn join<'a, I: IntoIterator<Item = &'a Rational>>(vals: I) -> String {
    vals.into_iter()
        .map(fmt_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    match inst {
        Instance::Cos(c) => {
            writeln!(out, "COS {} {}", c.n(), c.m()).unwrap();
            writeln!(out, "{}", join(c.weights())).unwrap();
            writeln!(out, "{}", join(c.releases())).unwrap();
            for row in c.processing() {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
        Instance::Coflow(c) => {
            writeln!(out, "COFLOW {} {}", c.n(), c.ports()).unwrap();
            writeln!(out, "{}", join(c.weights())).unwrap();
            writeln!(out, "{}", join(c.releases())).unwrap();
            for j in 0..c.n() {
                for row in c.demand(j) {
                    let row: Vec<String> = row.iter().map(u64::to_string).collect();
                    writeln!(out, "{}", row.join(" ")).unwrap();
                }
            }
        }
        Instance::Cluster(c) => {
            writeln!(out, "CC {} {}", c.n(), c.m()).unwrap();
            writeln!(out, "{}", join(c.weights())).unwrap();
            writeln!(out, "{}", join(c.releases())).unwrap();
            let sizes: Vec<String> = c.sizes().iter().map(usize::to_string).collect();
            writeln!(out, "{}", sizes.join(" ")).unwrap();
            for j in 0..c.n() {
                for i in 0..c.m() {
                    let tasks = c.tasks(j, i);
                    if tasks.is_empty() {
                        writeln!(out, "0").unwrap();
                    } else {
                        writeln!(out, "{} {}", tasks.len(), join(tasks)).unwrap();
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int, ratio};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("2.50").unwrap(), ratio(5, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7/14").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn parses_cos() {
        let text = "COS 2 2\n1 2\n0 1.5\n1 2\n3 1\n";
        let Instance::Cos(c) = parse_instance(text).unwrap() else {
            panic!()
        };
        assert_eq!(c.n(), 2);
        assert_eq!(c.releases()[1], ratio(3, 2));
        assert_eq!(c.p(1, 0), &int(3));
        assert_eq!(
            write_instance(&Instance::Cos(c)),
            "COS 2 2\n1 2\n0 3/2\n1 2\n3 1\n"
        );
    }

    #[test]
    fn parses_coflow_and_cluster() {
        let text = "COFLOW 1 2\n1\n0\n1 2\n3 4\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(write_instance(&inst), text);

        let text = "CC 2 2\n1 1\n0 0\n2 1\n3 5 4 3\n0\n1 2\n1 7\n";
        let inst = parse_instance(text).unwrap();
        let Instance::Cluster(c) = &inst else {
            panic!()
        };
        assert_eq!(c.tasks(0, 0), &[int(5), int(4), int(3)]);
        assert!(c.tasks(0, 1).is_empty());
        assert_eq!(write_instance(&inst), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_instance("COS 2 1\n1 2\n0 0 0\n1 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                msg: "expected 2 values for release times, found 3".into()
            }
        );

        let err = parse_instance("COS 1 1\n1\n0\n4\n5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");

        let err = parse_instance("COS 1 2\n1\n0\n4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");

        let err = parse_instance("COFLOW 1 1\n1\n0\n2.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");

        let err = parse_instance("CC 1 1\n1\n0\n2\n2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");

        let err = parse_instance("XYZ 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}

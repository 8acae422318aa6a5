//! Verification reports and their table/JSON/CSV renderings.

use std::fmt;
use std::str::FromStr;

use gfsuper_core::BettiTable;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Verdict {
    Match,
    Mismatch,
    /// Agreement on degrees `0..=P`, with the expected table nonzero above `P`.
    Partial(usize),
}

impl Verdict {
    /// Compares degrees `0..=p_top`.
    pub fn compare(computed: &BettiTable, expected: &BettiTable, p_top: usize) -> Verdict {
        if computed.prefix(p_top) != expected.prefix(p_top) {
            Verdict::Mismatch
        } else if expected.top_degree().is_some_and(|t| t > p_top) {
            Verdict::Partial(p_top)
        } else {
            Verdict::Match
        }
    }

    pub fn is_success(&self) -> bool {
        !matches!(self, Verdict::Mismatch)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Match => write!(f, "MATCH"),
            Verdict::Mismatch => write!(f, "MISMATCH"),
            Verdict::Partial(p) => write!(f, "PARTIAL(0..{p})"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "MATCH" => Ok(Verdict::Match),
            "MISMATCH" => Ok(Verdict::Mismatch),
            _ => s
                .strip_prefix("PARTIAL(0..")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|p| p.parse().ok())
                .map(Verdict::Partial)
                .ok_or_else(|| format!("unknown verdict {s:?}")),
        }
    }
}

impl From<Verdict> for String {
    fn from(v: Verdict) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for Verdict {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmax: Option<usize>,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(m) = self.m {
            parts.push(format!("m={m}"));
        }
        if let Some(n) = self.n {
            parts.push(format!("n={n}"));
        }
        if let Some(l) = &self.lambda {
            parts.push(format!("lambda=({l})"));
        }
        if let Some(p) = self.p {
            parts.push(format!("p={p}"));
        }
        if let Some(d) = self.max_degree {
            parts.push(format!("max_degree={d}"));
        }
        if let Some(d) = self.dmax {
            parts.push(format!("dmax={d}"));
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub params: Params,
    pub betti: BettiTable,
    pub expected: BettiTable,
    pub verdict: Verdict,
    pub degrees_checked: usize,
    pub wall_time_ms: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => serde_json::to_string(self).expect("report serializes") + "\n",
            Format::Csv => self.to_csv(),
        }
    }

    fn to_table(&self) -> String {
        let width = self.betti.len().max(self.expected.len());
        // expected tables are complete; computed ones stop at max_degree
        let row = |t: &BettiTable, complete: bool| {
            (0..width)
                .map(|p| match t.dims().get(p) {
                    Some(b) => format!("{b:>4}"),
                    None if complete => format!("{:>4}", 0),
                    None => format!("{:>4}", "-"),
                })
                .collect::<String>()
        };
        let degrees: String = (0..width).map(|p| format!("{p:>4}")).collect();
        format!(
            "claim     {}\nparams    {}\ndegree  {degrees}\ncomputed{}\nexpected{}\nverdict   {}\ntime      {} ms\n",
            self.claim,
            self.params,
            row(&self.betti, false),
            row(&self.expected, true),
            self.verdict,
            self.wall_time_ms
        )
    }

    fn to_csv(&self) -> String {
        let width = self.betti.len().max(self.expected.len());
        let mut out = String::from("claim,degree,betti,expected,verdict\n");
        for p in 0..width {
            let computed = self.betti.dims().get(p).map(usize::to_string).unwrap_or_default();
            out.push_str(&format!(
                "{},{p},{},{},{}\n",
                self.claim,
                computed,
                self.expected.get(p),
                self.verdict
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> BettiTable {
        BettiTable::new(v.to_vec())
    }

    #[test]
    fn verdicts() {
        assert_eq!(Verdict::compare(&t(&[1, 0, 0, 1, 0]), &t(&[1, 0, 0, 1]), 4), Verdict::Match);
        assert_eq!(
            Verdict::compare(&t(&[1, 0, 0, 0, 0, 2]), &t(&[1, 0, 0, 0, 0, 2, 0, 0, 1]), 5),
            Verdict::Partial(5)
        );
        assert_eq!(Verdict::compare(&t(&[1, 1]), &t(&[1, 0]), 1), Verdict::Mismatch);
        for v in [Verdict::Match, Verdict::Mismatch, Verdict::Partial(7)] {
            assert_eq!(v.to_string().parse::<Verdict>().unwrap(), v);
        }
        assert!("PARTIAL(1..2)".parse::<Verdict>().is_err());
    }

    #[test]
    fn renderings() {
        let r = Report {
            claim: "D".into(),
            params: Params {
                m: Some(1),
                max_degree: Some(4),
                ..Params::default()
            },
            betti: t(&[1, 0, 0, 1, 0]),
            expected: t(&[1, 0, 0, 1, 0]),
            verdict: Verdict::Match,
            degrees_checked: 5,
            wall_time_ms: 3,
        };
        let json = r.render(Format::Json);
        assert!(json.contains(r#""betti":[1,0,0,1,0]"#));
        assert!(json.contains(r#""verdict":"MATCH""#));
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), r);
        let csv = r.render(Format::Csv);
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.lines().nth(4).unwrap().starts_with("D,3,1,1,MATCH"));
        assert!(r.render(Format::Table).contains("verdict   MATCH"));
    }
}

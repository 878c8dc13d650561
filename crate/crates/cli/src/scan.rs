//! Grid sweep of centred holes over a rectangle of `(a, b)` parameters.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};

use lexworld::renorm::{classify, ClassifyInput, Hole, Ie, Tag};
use lexworld::{Error, Rat};
use rayon::prelude::*;

use crate::output::fmt_float;

pub const HEADER: [&str; 10] = [
    "a", "b", "tag", "level", "ratios", "kappa", "h_bits", "dim", "ie", "ie_provenance",
];

/// Tag written for cells whose hole shape has no symbolic reduction.
pub const UNSUPPORTED: &str = "Unsupported";

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub denominator: u64,
    pub a_range: (Rat, Rat),
    pub b_range: (Rat, Rat),
    pub jobs: usize,
}

impl ScanSpec {
    pub fn new(denominator: u64) -> Result<Self, Error> {
        let q = |n: i64, d: i64| Rat::new(n, d);
        Ok(ScanSpec {
            denominator,
            a_range: (q(1, 4)?, q(1, 2)?),
            b_range: (q(1, 2)?, q(3, 4)?),
            jobs: 1,
        })
    }

    fn axis(&self, (lo, hi): &(Rat, Rat)) -> Vec<u64> {
        let d = self.denominator as i64;
        (1..self.denominator)
            .filter(|&i| {
                let x = Rat::new(i as i64, d).expect("inside the unit interval");
                lo < &x && &x < hi
            })
            .collect()
    }

    /// Grid points strictly inside the rectangle, ordered by `(i, j)`.
    pub fn cells(&self) -> Vec<(u64, u64)> {
        let (is, js) = (self.axis(&self.a_range), self.axis(&self.b_range));
        is.iter().flat_map(|&i| js.iter().map(move |&j| (i, j))).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub a: Rat,
    pub b: Rat,
    pub tag: String,
    pub level: Option<usize>,
    pub ratios: String,
    pub kappa: Option<f64>,
    pub h_bits: Option<f64>,
    pub dim: Option<f64>,
    pub ie: String,
    pub ie_provenance: String,
}

impl Row {
    fn record(&self) -> [String; 10] {
        let f = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        [
            self.a.to_string(),
            self.b.to_string(),
            self.tag.clone(),
            self.level.map(|l| l.to_string()).unwrap_or_default(),
            self.ratios.clone(),
            f(self.kappa),
            f(self.h_bits),
            f(self.dim),
            self.ie.clone(),
            self.ie_provenance.clone(),
        ]
    }
}

pub fn classify_cell(d: u64, i: u64, j: u64) -> Row {
    let a = Rat::new(i as i64, d as i64).expect("grid point in range");
    let b = Rat::new(j as i64, d as i64).expect("grid point in range");
    let blank = |tag: &str| Row {
        a: a.clone(),
        b: b.clone(),
        tag: tag.into(),
        level: None,
        ratios: String::new(),
        kappa: None,
        h_bits: None,
        dim: None,
        ie: Ie::NotApplicable.name().into(),
        ie_provenance: "not-applicable".into(),
    };
    let result = Hole::new(a.clone(), b.clone()).and_then(|h| classify(&ClassifyInput::Hole(h)));
    let c = match result {
        Ok(c) => c,
        Err(e) => return blank(if e == Error::UnsupportedHole { UNSUPPORTED } else { e.kind() }),
    };
    if let Tag::Extremal(_) = c.tag {
        return blank(c.tag.name());
    }
    Row {
        a,
        b,
        tag: c.tag.name().into(),
        level: Some(c.level),
        ratios: c.ratios.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(";"),
        kappa: c.entropy.kappa,
        h_bits: Some(c.entropy.h_bits),
        dim: Some(c.entropy.dim),
        ie: c.ie.name().into(),
        ie_provenance: c.ie_provenance.name().into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    /// Cells with positive entropy, and those among them verdicted ergodic.
    pub positive: usize,
    pub ergodic: usize,
    pub truncated: bool,
}

impl Summary {
    fn add(&mut self, r: &Row) {
        self.rows += 1;
        *self.counts.entry(r.tag.clone()).or_default() += 1;
        if r.h_bits.is_some_and(|h| h > 0.0) {
            self.positive += 1;
            if r.ie == Ie::IntrinsicallyErgodic.name() {
                self.ergodic += 1;
            }
        }
    }

    pub fn ie_fraction(&self) -> Option<f64> {
        (self.positive > 0).then(|| self.ergodic as f64 / self.positive as f64)
    }

    /// Footer text, without the leading comment marker.
    pub fn footer(&self) -> String {
        let mut parts = vec![format!("rows={}", self.rows)];
        let mut names: Vec<&str> = Tag::NAMES.to_vec();
        names.extend(self.counts.keys().map(String::as_str).filter(|k| !Tag::NAMES.contains(k)));
        for name in names {
            parts.push(format!("{}={}", name, self.counts.get(name).copied().unwrap_or(0)));
        }
        parts.push(format!(
            "ie_fraction={}",
            self.ie_fraction().map(fmt_float).unwrap_or_else(|| "nan".into())
        ));
        parts.join(" ")
    }
}

/// Writes the CSV in cell order, flushing after each chunk. When `stop` is
/// raised the remaining chunks are skipped and a truncation marker is written.
pub fn run_scan(spec: &ScanSpec, out: impl Write, stop: &AtomicBool) -> io::Result<Summary> {
    let cells = spec.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(io::Error::other)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    let mut summary = Summary {
        total: cells.len(),
        ..Summary::default()
    };
    let chunk = 4 * spec.jobs.max(1);
    for batch in cells.chunks(chunk) {
        if stop.load(Ordering::SeqCst) {
            summary.truncated = true;
            break;
        }
        let rows: Vec<Row> =
            pool.install(|| batch.par_iter().map(|&(i, j)| classify_cell(spec.denominator, i, j)).collect());
        for r in &rows {
            w.write_record(r.record())?;
            summary.add(r);
        }
        w.flush()?;
    }
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    if summary.truncated {
        writeln!(out, "# truncated: {} of {} rows written", summary.rows, summary.total)?;
    }
    writeln!(out, "# {}", summary.footer())?;
    out.flush()?;
    Ok(summary)
}

//! CSV time series of [`NormSample`]s.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::norms::NormSample;

const LEADING: [&str; 5] = ["t", "l1", "l2", "l4", "linf"];
const TRAILING: [&str; 4] = ["diss_x", "diss_y", "ul_l2", "uh_l2"];

fn gamma_label(g: f64) -> String {
    if g.fract() == 0.0 {
        format!("hg{}", g as i64)
    } else {
        format!("hg{g}")
    }
}

pub fn header(gammas: &[f64]) -> Vec<String> {
    LEADING
        .iter()
        .map(|s| s.to_string())
        .chain(gammas.iter().map(|&g| gamma_label(g)))
        .chain(TRAILING.iter().map(|s| s.to_string()))
        .collect()
}

// 17 significant digits round-trip every f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Row-at-a-time writer; each row is flushed so an aborted run keeps its
/// partial series.
pub struct TimeSeriesWriter<W: Write> {
    inner: csv::Writer<W>,
    gammas: Vec<f64>,
}

impl TimeSeriesWriter<File> {
    pub fn create(path: impl AsRef<Path>, gammas: &[f64]) -> Result<Self> {
        Self::new(File::create(path)?, gammas)
    }
}

impl<W: Write> TimeSeriesWriter<W> {
    pub fn new(out: W, gammas: &[f64]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(header(gammas))?;
        inner.flush()?;
        Ok(Self {
            inner,
            gammas: gammas.to_vec(),
        })
    }

    pub fn push(&mut self, s: &NormSample) -> Result<()> {
        let got: Vec<f64> = s.hgamma.iter().map(|p| p.0).collect();
        if got != self.gammas {
            return Err(Error::TimeSeries(format!(
                "sample at t = {} carries orders {got:?}, header has {:?}",
                s.t, self.gammas
            )));
        }
        let row: Vec<String> = [s.t, s.l1, s.l2, s.l4, s.linf]
            .into_iter()
            .chain(s.hgamma.iter().map(|p| p.1))
            .chain([s.diss_x, s.diss_y, s.ul_l2, s.uh_l2])
            .map(num)
            .collect();
        self.inner.write_record(&row)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))
    }
}

pub fn write_timeseries(series: &[NormSample], gammas: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let mut w = TimeSeriesWriter::create(path, gammas)?;
    for s in series {
        w.push(s)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub gammas: Vec<f64>,
    pub samples: Vec<NormSample>,
}

impl TimeSeries {
    /// `(t, value)` pairs of a named column such as `l2` or `hg1`.
    pub fn column(&self, name: &str) -> Option<Vec<(f64, f64)>> {
        let pick: Box<dyn Fn(&NormSample) -> f64> = match name {
            "t" => Box::new(|s| s.t),
            "l1" => Box::new(|s| s.l1),
            "l2" => Box::new(|s| s.l2),
            "l4" => Box::new(|s| s.l4),
            "linf" => Box::new(|s| s.linf),
            "diss_x" => Box::new(|s| s.diss_x),
            "diss_y" => Box::new(|s| s.diss_y),
            "ul_l2" => Box::new(|s| s.ul_l2),
            "uh_l2" => Box::new(|s| s.uh_l2),
            other => {
                let i = self.gammas.iter().position(|&g| gamma_label(g) == other)?;
                Box::new(move |s| s.hgamma[i].1)
            }
        };
        Some(self.samples.iter().map(|s| (s.t, pick(s))).collect())
    }
}

pub fn read_timeseries(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    let head: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let bad = |m: String| Error::TimeSeries(format!("{}: {m}", path.display()));

    let n = head.len();
    if n < LEADING.len() + TRAILING.len()
        || head[..LEADING.len()] != LEADING
        || head[n - TRAILING.len()..] != TRAILING
    {
        return Err(bad(format!("unexpected header {head:?}")));
    }
    let gammas = head[LEADING.len()..n - TRAILING.len()]
        .iter()
        .map(|h| {
            h.strip_prefix("hg")
                .and_then(|g| g.parse::<f64>().ok())
                .ok_or_else(|| bad(format!("bad column `{h}`")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let v = rec
            .iter()
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
        let k = gammas.len();
        samples.push(NormSample {
            t: v[0],
            l1: v[1],
            l2: v[2],
            l4: v[3],
            linf: v[4],
            hgamma: gammas.iter().copied().zip(v[5..5 + k].iter().copied()).collect(),
            diss_x: v[5 + k],
            diss_y: v[6 + k],
            ul_l2: v[7 + k],
            uh_l2: v[8 + k],
            ul_hgamma: vec![],
            uh_hgamma: vec![],
        });
    }
    if samples.windows(2).any(|w| !(w[0].t < w[1].t)) {
        return Err(bad("rows are not time-ordered".into()));
    }
    Ok(TimeSeries { gammas, samples })
}

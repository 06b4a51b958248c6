//! Demand sets built from signal data: windowing, segmentation, train /
//! validation splits, and coverage of held-out signals by an inflated hull.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, SolverConfig};
use crate::polytope::VPolytope;

/// Block means of `series` over windows of `window_len`; a trailing partial
/// window is dropped.
pub fn window_average(series: &[f64], window_len: usize) -> Result<Vec<f64>> {
    if series.is_empty() {
        return Err(Error::invalid("cannot average an empty series"));
    }
    if window_len == 0 {
        return Err(Error::invalid("window length must be positive"));
    }
    if series.len() < window_len {
        return Err(Error::invalid(format!(
            "series of length {} is shorter than one window of {window_len}",
            series.len()
        )));
    }
    Ok(series
        .chunks_exact(window_len)
        .map(|w| w.iter().sum::<f64>() / window_len as f64)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowStats {
    /// Length of the series the samples were cut from (0 when the samples
    /// were given directly).
    pub source_len: usize,
    /// Trailing points that did not fill a whole sample.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalDataset {
    samples: Vec<Vec<f64>>,
    pub provenance: String,
    pub stats: WindowStats,
}

impl SignalDataset {
    pub fn new(samples: Vec<Vec<f64>>, provenance: impl Into<String>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::invalid("a dataset needs at least one sample"));
        };
        let t = first.len();
        if t == 0 {
            return Err(Error::invalid("samples must have at least one period"));
        }
        if samples.iter().any(|s| s.len() != t) {
            return Err(Error::invalid("all samples must have the same length"));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("samples must be finite"));
        }
        Ok(SignalDataset {
            samples,
            provenance: provenance.into(),
            stats: WindowStats {
                source_len: 0,
                dropped: 0,
            },
        })
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn horizon(&self) -> usize {
        self.samples[0].len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The samples laid end to end.
    pub fn concat(&self) -> Vec<f64> {
        self.samples.concat()
    }
}

/// Cuts `series` into consecutive, non-overlapping samples of length `t`.
pub fn segment(series: &[f64], t: usize) -> Result<SignalDataset> {
    if t == 0 {
        return Err(Error::invalid("sample length must be positive"));
    }
    if series.len() < t {
        return Err(Error::invalid(format!(
            "series of length {} is shorter than one sample of {t}",
            series.len()
        )));
    }
    let samples: Vec<Vec<f64>> = series.chunks_exact(t).map(<[f64]>::to_vec).collect();
    let mut ds = SignalDataset::new(samples, format!("segmented series, T={t}"))?;
    ds.stats = WindowStats {
        source_len: series.len(),
        dropped: series.len() % t,
    };
    Ok(ds)
}

/// Order-preserving split into the first `n_train` samples and the rest.
pub fn split(ds: &SignalDataset, n_train: usize) -> Result<(SignalDataset, SignalDataset)> {
    if n_train == 0 || n_train >= ds.len() {
        return Err(Error::invalid(format!(
            "training size must lie strictly between 0 and {}, got {n_train}",
            ds.len()
        )));
    }
    let (a, b) = ds.samples.split_at(n_train);
    let part = |s: &[Vec<f64>], name: &str| SignalDataset {
        samples: s.to_vec(),
        provenance: format!("{} ({name})", ds.provenance),
        stats: ds.stats.clone(),
    };
    Ok((part(a, "training"), part(b, "validation")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    #[default]
    Centroid,
    Origin,
}

/// The hull of the training samples, inflated by `delta` about `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandSetModel {
    pub training: VPolytope,
    pub center: Vec<f64>,
    pub delta: f64,
}

impl DemandSetModel {
    pub fn build(train: &SignalDataset, center: Center, delta: f64) -> Result<Self> {
        let training = VPolytope::new(train.samples.clone())?;
        let center = match center {
            Center::Centroid => training.centroid(),
            Center::Origin => vec![0.0; training.horizon()],
        };
        Self::with_center(training, center, delta)
    }

    pub fn with_center(training: VPolytope, center: Vec<f64>, delta: f64) -> Result<Self> {
        if center.len() != training.horizon() {
            return Err(Error::invalid("center dimension differs from the samples"));
        }
        check_delta(delta)?;
        Ok(DemandSetModel {
            training,
            center,
            delta,
        })
    }

    pub fn horizon(&self) -> usize {
        self.training.horizon()
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(DemandSetModel {
            delta,
            ..self.clone()
        })
    }

    /// Convex weights on the training samples reproducing `x` at this model's
    /// inflation, or `None` when `x` lies outside.
    pub fn certificate(&self, x: &[f64], cfg: &SolverConfig) -> Result<Option<Vec<f64>>> {
        self.training
            .convex_certificate(x, self.delta, Some(&self.center), cfg)
    }

    pub fn contains(&self, x: &[f64], cfg: &SolverConfig) -> Result<bool> {
        Ok(self.certificate(x, cfg)?.is_some())
    }

    /// Smallest inflation whose hull contains `x`, or `None` if no inflation
    /// does.
    ///
    /// Solves `min Σμ` over `μ ≥ 0` with `Σ μ_j (v_j − c) = x − c`. When the
    /// center lies in the hull every larger inflation also contains `x`.
    pub fn enclosing_delta(&self, x: &[f64], cfg: &SolverConfig) -> Result<Option<f64>> {
        let t = self.horizon();
        if x.len() != t {
            return Err(Error::invalid("point dimension differs from the samples"));
        }
        let v = self.training.vertices();
        let mut lp = LinearProgram::new(v.len());
        for j in 0..v.len() {
            lp.set_objective(j, 1.0);
        }
        for d in 0..t {
            lp.add_eq(
                v.iter()
                    .enumerate()
                    .map(|(j, vj)| (j, vj[d] - self.center[d])),
                x[d] - self.center[d],
            )?;
        }
        let sol = solve_lp(&lp, cfg)?;
        Ok(match sol.status {
            LpStatus::Optimal => sol.objective_value,
            _ => None,
        })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta < 1.0 {
        return Err(Error::invalid(format!(
            "inflation factor must be a finite number ≥ 1, got {delta}"
        )));
    }
    Ok(())
}

/// Fraction of `validation` samples inside the model's inflated hull. One LP
/// per sample; samples are spread over the available threads.
pub fn coverage_ratio(
    model: &DemandSetModel,
    validation: &SignalDataset,
    cfg: &SolverConfig,
) -> Result<f64> {
    if validation.horizon() != model.horizon() {
        return Err(Error::invalid(format!(
            "validation horizon {} differs from model horizon {}",
            validation.horizon(),
            model.horizon()
        )));
    }
    let samples = validation.samples();
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(samples.len())
        .max(1);
    let chunk = samples.len().div_ceil(threads);
    let counts: Vec<Result<usize>> = std::thread::scope(|s| {
        let handles: Vec<_> = samples
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut n = 0;
                    for x in part {
                        if model.contains(x, cfg)? {
                            n += 1;
                        }
                    }
                    Ok(n)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("coverage worker panicked"))
            .collect()
    });
    let mut covered = 0;
    for c in counts {
        covered += c?;
    }
    Ok(covered as f64 / samples.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    pub delta: f64,
    pub coverage: f64,
}

/// Coverage at every inflation of an ascending grid.
pub fn coverage_curve(
    model: &DemandSetModel,
    validation: &SignalDataset,
    grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<CoveragePoint>> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "the inflation grid must be sorted ascending",
        ));
    }
    grid.iter()
        .map(|&delta| {
            let m = model.with_delta(delta)?;
            Ok(CoveragePoint {
                delta,
                coverage: coverage_ratio(&m, validation, cfg)?,
            })
        })
        .collect()
}

pub fn write_curve_csv<W: Write>(writer: W, curve: &[CoveragePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::invalid(format!("writing coverage CSV: {e}"));
    w.write_record(["delta", "coverage"]).map_err(io)?;
    for p in curve {
        w.write_record([p.delta.to_string(), p.coverage.to_string()])
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::invalid(format!("writing coverage CSV: {e}")))?;
    Ok(())
}

/// Contents of a signal CSV: one column is a raw series, several columns are
/// samples already cut to length.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalData {
    Series(Vec<f64>),
    Samples(Vec<Vec<f64>>),
}

impl SignalData {
    /// Samples of length `t`: raw series are segmented, pre-cut samples must
    /// already have length `t`.
    pub fn into_dataset(self, t: usize) -> Result<SignalDataset> {
        match self {
            SignalData::Series(s) => segment(&s, t),
            SignalData::Samples(rows) => {
                if rows.first().is_some_and(|r| r.len() != t) {
                    return Err(Error::invalid(format!(
                        "CSV has {} columns but T={t}",
                        rows[0].len()
                    )));
                }
                SignalDataset::new(rows, "pre-segmented samples")
            }
        }
    }
}

pub fn read_signal_csv<R: Read>(reader: R) -> Result<SignalData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::invalid(format!("signal CSV row {}: {e}", i + 1)))?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("signal CSV row {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    match rows.first().map(Vec::len) {
        None => Err(Error::invalid("signal CSV has no rows")),
        Some(1) => Ok(SignalData::Series(rows.into_iter().map(|r| r[0]).collect())),
        Some(_) => Ok(SignalData::Samples(rows)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages_blocks() {
        assert_eq!(
            window_average(&[1.0, 1.0, 3.0, 3.0], 2).unwrap(),
            vec![1.0, 3.0]
        );
        assert_eq!(window_average(&[2.0; 7], 3).unwrap(), vec![2.0, 2.0]);
        assert!(window_average(&[], 2).is_err());
    }

    #[test]
    fn segments_drop_remainder() {
        let s: Vec<f64> = (0..13).map(f64::from).collect();
        let ds = segment(&s, 6).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.stats.dropped, 1);
        assert_eq!(ds.samples()[1][0], 6.0);
    }

    #[test]
    fn split_bounds() {
        let ds = segment(&[0.0; 12], 3).unwrap();
        for n in [1, 2, 3] {
            let (a, b) = split(&ds, n).unwrap();
            assert_eq!((a.len(), b.len()), (n, 4 - n));
        }
        assert!(split(&ds, 0).is_err());
        assert!(split(&ds, 4).is_err());
    }

    #[test]
    fn enclosing_delta_of_a_square() {
        let train = SignalDataset::new(
            vec![
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
            ],
            "square",
        )
        .unwrap();
        let m = DemandSetModel::build(&train, Center::Centroid, 1.0).unwrap();
        let cfg = SolverConfig::default();
        assert!((m.enclosing_delta(&[2.0, 0.5], &cfg).unwrap().unwrap() - 2.0).abs() < 1e-9);
        assert!(m.contains(&[0.5, 0.5], &cfg).unwrap());
        assert!(!m.contains(&[1.5, 0.0], &cfg).unwrap());
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(
            read_signal_csv("x\n1\n2\n".as_bytes()).unwrap(),
            SignalData::Series(vec![1.0, 2.0])
        );
        let d = read_signal_csv("a,b\n1,2\n3,4\n".as_bytes()).unwrap();
        assert_eq!(d.into_dataset(2).unwrap().len(), 2);
    }
}

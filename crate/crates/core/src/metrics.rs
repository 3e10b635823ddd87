//! Confusion counts, F-measure, ROC curve and AUC for binary labels, with
//! class 1 as the positive class.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision<T: Scalar>(&self) -> T {
        safe_ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall<T: Scalar>(&self) -> T {
        safe_ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f_measure<T: Scalar>(&self) -> T {
        f_measure(self.tp, self.fp, self.fn_)
    }
}

fn safe_ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::ratio(num, den)
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    if a == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(())
}

pub fn confusion(labels: &[u8], predictions: &[u8]) -> Result<Confusion> {
    check_lengths(labels.len(), predictions.len())?;
    let mut c = Confusion::default();
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y == 1, p == 1) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Harmonic mean of precision and recall; zero when `tp == 0`.
pub fn f_measure<T: Scalar>(tp: usize, fp: usize, fn_: usize) -> T {
    if tp == 0 {
        return T::zero();
    }
    // 2PR/(P+R) simplifies to 2tp / (2tp + fp + fn)
    T::ratio(2 * tp, 2 * tp + fp + fn_)
}

/// ROC operating points from the highest threshold down, one per distinct
/// score, starting at `(0, 0)` and ending at `(1, 1)`.
pub fn roc_curve<T: Scalar>(labels: &[u8], scores: &[T]) -> Result<Vec<(T, T)>> {
    check_lengths(labels.len(), scores.len())?;
    if scores.iter().any(|s| s.partial_cmp(s).is_none()) {
        return Err(Error::InvalidParameter(
            "score is not comparable (NaN)".into(),
        ));
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass("ROC"));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(Ordering::Equal));

    let mut points = vec![(T::zero(), T::zero())];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((T::ratio(fp, negatives), T::ratio(tp, positives)));
    }
    Ok(points)
}

/// Trapezoidal area under [`roc_curve`]. Tied scores form one diagonal
/// segment, which matches the Mann-Whitney statistic with ties counted as
/// one half.
pub fn auc_roc<T: Scalar>(labels: &[u8], scores: &[T]) -> Result<T> {
    Ok(trapezoid(&roc_curve(labels, scores)?))
}

pub fn trapezoid<T: Scalar>(points: &[(T, T)]) -> T {
    points.windows(2).fold(T::zero(), |acc, w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        acc + (x1 - x0) * (y0 + y1) * T::half()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport<T> {
    pub confusion: Confusion,
    pub precision: T,
    pub recall: T,
    pub f_measure: T,
    pub roc_points: Vec<(T, T)>,
    pub auc: T,
}

impl<T: Scalar> MetricsReport<T> {
    /// `scores` feed the ROC curve, `predictions` the confusion matrix.
    pub fn new(labels: &[u8], scores: &[T], predictions: &[u8]) -> Result<Self> {
        let confusion = confusion(labels, predictions)?;
        let roc_points = roc_curve(labels, scores)?;
        Ok(Self {
            precision: confusion.precision(),
            recall: confusion.recall(),
            f_measure: confusion.f_measure(),
            auc: trapezoid(&roc_points),
            roc_points,
            confusion,
        })
    }

    pub const CSV_HEADER: &'static str = "tp,fp,tn,fn,precision,recall,f_measure,auc";

    pub fn csv_row(&self) -> String {
        let c = &self.confusion;
        format!(
            "{},{},{},{},{},{},{},{}",
            c.tp,
            c.fp,
            c.tn,
            c.fn_,
            self.precision.as_f64(),
            self.recall.as_f64(),
            self.f_measure.as_f64(),
            self.auc.as_f64()
        )
    }
}

impl<T: Scalar> fmt::Display for MetricsReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.confusion;
        writeln!(f, "records    {}", c.total())?;
        writeln!(f, "           predicted 1  predicted 0")?;
        writeln!(f, "actual 1   {:>11}  {:>11}", c.tp, c.fn_)?;
        writeln!(f, "actual 0   {:>11}  {:>11}", c.fp, c.tn)?;
        writeln!(f, "precision  {:.4}", self.precision.as_f64())?;
        writeln!(f, "recall     {:.4}", self.recall.as_f64())?;
        writeln!(f, "F-measure  {:.4}", self.f_measure.as_f64())?;
        writeln!(f, "AUC-ROC    {:.4}", self.auc.as_f64())?;
        write!(f, "ROC points {}", self.roc_points.len())
    }
}

//! Finite two-class data spaces with extensional feature sets.
//!
//! A space is a weighted list of labelled points plus a list of features,
//! where a feature is simply the set of point indices containing it.
//! Feature index 0 is reserved for the empty feature, so selector tables can
//! encode "show nothing" uniformly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{sum, Real};

/// Index into a space's point list.
pub type PointId = usize;
/// Index into a space's feature list; `EMPTY_FEATURE` is always the empty set.
pub type FeatureId = usize;

/// Reserved index of the empty feature.
pub const EMPTY_FEATURE: FeatureId = 0;

/// Two-class label, stored as ±1 in files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Minus,
    Plus,
}

impl Label {
    pub fn sign(self) -> i8 {
        match self {
            Label::Minus => -1,
            Label::Plus => 1,
        }
    }

    pub fn from_sign(v: i8) -> Option<Label> {
        match v {
            -1 => Some(Label::Minus),
            1 => Some(Label::Plus),
            _ => None,
        }
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Minus => Label::Plus,
            Label::Plus => Label::Minus,
        }
    }

    pub const BOTH: [Label; 2] = [Label::Minus, Label::Plus];
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Label::from_sign(v).ok_or_else(|| serde::de::Error::custom("label must be -1 or 1"))
    }
}

/// Three-valued verdict of a partial classifier: -1, 0 ("I don't know"), +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Verdict {
    Minus,
    #[default]
    Unknown,
    Plus,
}

impl Verdict {
    pub fn sign(self) -> i8 {
        match self {
            Verdict::Minus => -1,
            Verdict::Unknown => 0,
            Verdict::Plus => 1,
        }
    }

    pub fn from_sign(v: i8) -> Option<Verdict> {
        match v {
            -1 => Some(Verdict::Minus),
            0 => Some(Verdict::Unknown),
            1 => Some(Verdict::Plus),
            _ => None,
        }
    }

    pub fn of_label(l: Label) -> Verdict {
        match l {
            Label::Minus => Verdict::Minus,
            Label::Plus => Verdict::Plus,
        }
    }

    pub fn is_label(self, l: Label) -> bool {
        self == Verdict::of_label(l)
    }

    /// Order used for lexicographic tie-breaks: -1 < 0 < +1.
    pub const ORDERED: [Verdict; 3] = [Verdict::Minus, Verdict::Unknown, Verdict::Plus];
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Verdict::from_sign(v).ok_or_else(|| serde::de::Error::custom("verdict must be -1, 0 or 1"))
    }
}

/// One data point: its index plus an optional payload vector in `[0,1]^d`
/// (present when the space embeds image-like data).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point<F> {
    pub id: PointId,
    #[serde(default = "no_payload", skip_serializing_if = "Option::is_none")]
    pub payload: Option<Vec<F>>,
}

fn no_payload<F>() -> Option<Vec<F>> {
    None
}

/// Structural errors: states that cannot even be represented coherently.
/// Axiom violations are *reported* by [`FiniteDataSpace::validate`] instead.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("points, prob and label lists must have equal nonzero length")]
    LengthMismatch,
    #[error("feature {feature} references point {point} out of range")]
    PointOutOfRange { feature: FeatureId, point: PointId },
    #[error("feature 0 is reserved for the empty feature and must be empty")]
    ReservedEmptyFeature,
    #[error("payload dimensions differ between points")]
    PayloadDimMismatch,
    #[error("selector entry for point {point} names feature {feature} which does not contain it")]
    SelectorMembership { point: PointId, feature: FeatureId },
    #[error("table length {got} does not match expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("restriction keeps no probability mass")]
    EmptyRestriction,
    #[error("a class has zero probability; the space is degenerate")]
    DegenerateClass,
}

/// First violated feature-space axiom, with a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AxiomViolation {
    NegativeProbability {
        point: PointId,
    },
    UnnormalizedProbability {
        sum: f64,
    },
    /// Axiom 1: some point lies in no non-empty feature.
    UncoveredPoint {
        point: PointId,
    },
    /// Axiom 3: two distinct points share exactly the same features.
    IndiscerniblePair {
        a: PointId,
        b: PointId,
    },
    /// Class imbalance must be finite: both labels need positive mass.
    MissingClass {
        label: i8,
    },
}

/// Outcome of [`FiniteDataSpace::validate`]: pass, or the first violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violation: Option<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// A finite two-class data space: points with probability weights and ±1
/// labels, plus features stored extensionally as sorted point-index sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDataSpace<F> {
    points: Vec<Point<F>>,
    prob: Vec<F>,
    label: Vec<Label>,
    features: Vec<Vec<PointId>>,
    /// Non-empty features containing each point, sorted ascending.
    #[serde(skip)]
    incidence: Vec<Vec<FeatureId>>,
}

impl<F: Real> FiniteDataSpace<F> {
    /// Assemble a space from raw parts. Checks only structural coherence;
    /// run [`Self::validate`] for the axioms.
    pub fn assemble(
        points: Vec<Point<F>>,
        prob: Vec<F>,
        label: Vec<Label>,
        mut features: Vec<Vec<PointId>>,
    ) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 || prob.len() != n || label.len() != n {
            return Err(SpaceError::LengthMismatch);
        }
        if features.is_empty() {
            features.push(Vec::new());
        }
        if !features[EMPTY_FEATURE].is_empty() {
            return Err(SpaceError::ReservedEmptyFeature);
        }
        for (f, members) in features.iter_mut().enumerate() {
            members.sort_unstable();
            members.dedup();
            if let Some(&p) = members.iter().find(|&&p| p >= n) {
                return Err(SpaceError::PointOutOfRange {
                    feature: f,
                    point: p,
                });
            }
        }
        let dim = points.iter().find_map(|p| p.payload.as_ref().map(Vec::len));
        if let Some(d) = dim {
            if points
                .iter()
                .any(|p| p.payload.as_ref().is_some_and(|v| v.len() != d))
            {
                return Err(SpaceError::PayloadDimMismatch);
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (f, members) in features.iter().enumerate().skip(1) {
            for &p in members {
                incidence[p].push(f);
            }
        }
        Ok(FiniteDataSpace {
            points,
            prob,
            label,
            features,
            incidence,
        })
    }

    /// Convenience constructor for payload-free spaces.
    pub fn tabular(
        prob: Vec<F>,
        label: Vec<Label>,
        features: Vec<Vec<PointId>>,
    ) -> Result<Self, SpaceError> {
        let points = (0..prob.len())
            .map(|id| Point { id, payload: None })
            .collect();
        Self::assemble(points, prob, label, features)
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }

    pub fn prob(&self, p: PointId) -> F {
        self.prob[p]
    }

    pub fn probs(&self) -> &[F] {
        &self.prob
    }

    pub fn label(&self, p: PointId) -> Label {
        self.label[p]
    }

    pub fn labels(&self) -> &[Label] {
        &self.label
    }

    pub fn feature(&self, f: FeatureId) -> &[PointId] {
        &self.features[f]
    }

    pub fn features(&self) -> &[Vec<PointId>] {
        &self.features
    }

    /// Non-empty features containing point `p`.
    pub fn features_of(&self, p: PointId) -> &[FeatureId] {
        &self.incidence[p]
    }

    pub fn contains(&self, f: FeatureId, p: PointId) -> bool {
        self.features[f].binary_search(&p).is_ok()
    }

    /// Probability mass of a feature (sum over member points).
    pub fn feature_mass(&self, f: FeatureId) -> F {
        sum(self.features[f].iter().map(|&p| self.prob[p]))
    }

    /// Probability mass of one class.
    pub fn class_mass(&self, l: Label) -> F {
        sum((0..self.n_points())
            .filter(|&p| self.label[p] == l)
            .map(|p| self.prob[p]))
    }

    /// Check the feature-space axioms plus distribution sanity; returns the
    /// first violation with a witness rather than erroring.
    pub fn validate(&self) -> ValidationReport {
        let fail = |v| ValidationReport { violation: Some(v) };
        for (p, &w) in self.prob.iter().enumerate() {
            if w < F::zero() {
                return fail(AxiomViolation::NegativeProbability { point: p });
            }
        }
        let total = sum(self.prob.iter().copied());
        if (total - F::one()).abs() > F::unit_tolerance() {
            return fail(AxiomViolation::UnnormalizedProbability { sum: total.f64() });
        }
        if let Some(p) = (0..self.n_points()).find(|&p| self.incidence[p].is_empty()) {
            return fail(AxiomViolation::UncoveredPoint { point: p });
        }
        for a in 0..self.n_points() {
            for b in a + 1..self.n_points() {
                if self.incidence[a] == self.incidence[b] {
                    return fail(AxiomViolation::IndiscerniblePair { a, b });
                }
            }
        }
        for l in Label::BOTH {
            if self.class_mass(l) <= F::zero() {
                return fail(AxiomViolation::MissingClass { label: l.sign() });
            }
        }
        ValidationReport { violation: None }
    }

    /// Class imbalance `B = max_l P[c=l] / P[c=-l]`, at least 1.
    pub fn class_imbalance(&self) -> Result<F, SpaceError> {
        let minus = self.class_mass(Label::Minus);
        let plus = self.class_mass(Label::Plus);
        if minus <= F::zero() || plus <= F::zero() {
            return Err(SpaceError::DegenerateClass);
        }
        Ok((minus / plus).max(plus / minus))
    }

    /// Condition the space on a point set: renormalized probabilities on the
    /// kept points, features intersected with the kept set (indices stable,
    /// empty feature kept at 0).
    pub fn restrict(&self, keep: &[PointId]) -> Result<Self, SpaceError> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        keep.retain(|&p| p < self.n_points());
        let total = sum(keep.iter().map(|&p| self.prob[p]));
        if keep.is_empty() || total <= F::zero() {
            return Err(SpaceError::EmptyRestriction);
        }
        let mut new_id = vec![usize::MAX; self.n_points()];
        for (i, &p) in keep.iter().enumerate() {
            new_id[p] = i;
        }
        let points = keep
            .iter()
            .enumerate()
            .map(|(i, &p)| Point {
                id: i,
                payload: self.points[p].payload.clone(),
            })
            .collect();
        let prob = keep.iter().map(|&p| self.prob[p] / total).collect();
        let label = keep.iter().map(|&p| self.label[p]).collect();
        let features = self
            .features
            .iter()
            .map(|members| {
                members
                    .iter()
                    .filter(|&&p| new_id[p] != usize::MAX)
                    .map(|&p| new_id[p])
                    .collect()
            })
            .collect();
        Self::assemble(points, prob, label, features)
    }
}

/// Per-point feature choice: for every point, either a feature containing it
/// or the empty feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSelectorTable {
    pub choice: Vec<FeatureId>,
}

impl FeatureSelectorTable {
    pub fn empty(n_points: usize) -> Self {
        FeatureSelectorTable {
            choice: vec![EMPTY_FEATURE; n_points],
        }
    }

    pub fn get(&self, p: PointId) -> FeatureId {
        self.choice[p]
    }

    pub fn uses_empty(&self) -> bool {
        self.choice.contains(&EMPTY_FEATURE)
    }

    /// Enforce the membership-or-empty invariant against a space.
    pub fn check<F: Real>(&self, space: &FiniteDataSpace<F>) -> Result<(), SpaceError> {
        if self.choice.len() != space.n_points() {
            return Err(SpaceError::TableLength {
                got: self.choice.len(),
                expected: space.n_points(),
            });
        }
        for (p, &f) in self.choice.iter().enumerate() {
            if f >= space.n_features() {
                return Err(SpaceError::SelectorMembership {
                    point: p,
                    feature: f,
                });
            }
            if f != EMPTY_FEATURE && !space.contains(f, p) {
                return Err(SpaceError::SelectorMembership {
                    point: p,
                    feature: f,
                });
            }
        }
        Ok(())
    }
}

/// Per-feature verdict table: Arthur on finite spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierTable {
    pub verdict: Vec<Verdict>,
}

impl ClassifierTable {
    pub fn unknown(n_features: usize) -> Self {
        ClassifierTable {
            verdict: vec![Verdict::Unknown; n_features],
        }
    }

    pub fn get(&self, f: FeatureId) -> Verdict {
        self.verdict[f]
    }

    pub fn check<F: Real>(&self, space: &FiniteDataSpace<F>) -> Result<(), SpaceError> {
        if self.verdict.len() != space.n_features() {
            return Err(SpaceError::TableLength {
                got: self.verdict.len(),
                expected: space.n_features(),
            });
        }
        Ok(())
    }
}

pub mod exemplars;
pub mod random;

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> FiniteDataSpace<f64> {
        // Two points, one shared feature, one singleton.
        FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Minus, Label::Plus],
            vec![vec![], vec![0, 1], vec![0]],
        )
        .unwrap()
    }

    #[test]
    fn assemble_rejects_structural_problems() {
        assert_eq!(
            FiniteDataSpace::<f64>::tabular(vec![], vec![], vec![vec![]]),
            Err(SpaceError::LengthMismatch)
        );
        assert_eq!(
            FiniteDataSpace::<f64>::tabular(vec![1.0], vec![Label::Plus], vec![vec![0]]),
            Err(SpaceError::ReservedEmptyFeature)
        );
        assert_eq!(
            FiniteDataSpace::<f64>::tabular(vec![1.0], vec![Label::Plus], vec![vec![], vec![0, 3]]),
            Err(SpaceError::PointOutOfRange {
                feature: 1,
                point: 3
            })
        );
    }

    #[test]
    fn validate_reports_first_violation_with_witness() {
        let s = tiny();
        assert!(s.validate().is_pass());

        // A point outside every non-empty feature fails axiom 1.
        let s = FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Minus, Label::Plus],
            vec![vec![], vec![0]],
        )
        .unwrap();
        assert_eq!(
            s.validate().violation,
            Some(AxiomViolation::UncoveredPoint { point: 1 })
        );

        // Identical membership fails axiom 3 with the pair.
        let s = FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Minus, Label::Plus],
            vec![vec![], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(
            s.validate().violation,
            Some(AxiomViolation::IndiscerniblePair { a: 0, b: 1 })
        );

        // One-class spaces have unbounded imbalance.
        let s = FiniteDataSpace::tabular(
            vec![0.5, 0.5],
            vec![Label::Plus, Label::Plus],
            vec![vec![], vec![0, 1], vec![0]],
        )
        .unwrap();
        assert_eq!(
            s.validate().violation,
            Some(AxiomViolation::MissingClass { label: -1 })
        );
        assert_eq!(s.class_imbalance(), Err(SpaceError::DegenerateClass));
    }

    #[test]
    fn class_imbalance_examples() {
        assert_eq!(tiny().class_imbalance().unwrap(), 1.0);
        let s = FiniteDataSpace::tabular(
            vec![0.75, 0.25],
            vec![Label::Plus, Label::Minus],
            vec![vec![], vec![0], vec![1]],
        )
        .unwrap();
        assert!((s.class_imbalance().unwrap() - 3.0f64).abs() < 1e-12);
    }

    #[test]
    fn restrict_identity_and_singleton() {
        let s = tiny();
        let same = s.restrict(&[0, 1]).unwrap();
        for p in 0..2 {
            assert!((same.prob(p) - s.prob(p)).abs() < 1e-12);
        }
        assert_eq!(same.features(), s.features());

        let one = s.restrict(&[1]).unwrap();
        assert_eq!(one.n_points(), 1);
        assert_eq!(one.prob(0), 1.0);
        assert_eq!(one.feature(1), &[0]);
        assert_eq!(one.feature(2), &[] as &[usize]);

        assert_eq!(s.restrict(&[]), Err(SpaceError::EmptyRestriction));
    }

    #[test]
    fn selector_and_classifier_checks() {
        let s = tiny();
        let ok = FeatureSelectorTable { choice: vec![2, 1] };
        assert!(ok.check(&s).is_ok());
        let bad = FeatureSelectorTable { choice: vec![1, 2] };
        assert_eq!(
            bad.check(&s),
            Err(SpaceError::SelectorMembership {
                point: 1,
                feature: 2
            })
        );
        let empty_ok = FeatureSelectorTable::empty(2);
        assert!(empty_ok.check(&s).is_ok());

        assert!(ClassifierTable::unknown(3).check(&s).is_ok());
        assert_eq!(
            ClassifierTable::unknown(2).check(&s),
            Err(SpaceError::TableLength {
                got: 2,
                expected: 3
            })
        );
    }

    #[test]
    fn labels_and_verdicts_serialize_as_signs() {
        let l: Label = serde_json::from_str("-1").unwrap();
        assert_eq!(l, Label::Minus);
        assert_eq!(serde_json::to_string(&Label::Plus).unwrap(), "1");
        let v: Verdict = serde_json::from_str("0").unwrap();
        assert_eq!(v, Verdict::Unknown);
        assert!(serde_json::from_str::<Verdict>("2").is_err());
    }
}

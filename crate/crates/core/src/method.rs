use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Coefficients of the combined Lance-Williams update
///
/// ```text
/// d(I∪J, K) = alpha_i d(I,K) + alpha_j d(J,K) + beta d(I,J) + gamma |d(I,K) - d(J,K)|
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlexibleCoefficients {
    pub alpha_i: f64,
    pub alpha_j: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl FlexibleCoefficients {
    pub fn new(alpha_i: f64, alpha_j: f64, beta: f64, gamma: f64) -> FlexibleCoefficients {
        FlexibleCoefficients {
            alpha_i,
            alpha_j,
            beta,
            gamma,
        }
    }

    #[inline]
    pub fn apply(&self, d_ik: f64, d_jk: f64, d_ij: f64) -> f64 {
        self.alpha_i * d_ik + self.alpha_j * d_jk + self.beta * d_ij + self.gamma * (d_ik - d_jk).abs()
    }
}

/// The linkage criterion: how the dissimilarity from a freshly merged
/// cluster to every other cluster is derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Minimum dissimilarity between members.
    Single,
    /// Maximum dissimilarity between members.
    Complete,
    /// Mean dissimilarity between members (UPGMA).
    Average,
    /// Mean of the two merged clusters' dissimilarities (WPGMA).
    Weighted,
    /// Ward's minimum variance criterion.
    Ward,
    /// Distance between cluster centroids (UPGMC).
    Centroid,
    /// Distance between recursively defined midpoints (WPGMC).
    Median,
    /// A user-supplied Lance-Williams recurrence, evaluated on the raw
    /// (unsquared) dissimilarities.
    Flexible(FlexibleCoefficients),
}

/// Discriminant of [`Method`] without the flexible coefficients.
#[derive(Clone, Copy, Debug, Eq, PartialEq, Hash, PartialOrd, Ord)]
pub enum MethodKind {
    Single,
    Complete,
    Average,
    Weighted,
    Ward,
    Centroid,
    Median,
    Flexible,
}

impl Method {
    /// The seven named schemes, in the conventional order.
    pub const NAMED: [Method; 7] = [
        Method::Single,
        Method::Complete,
        Method::Average,
        Method::Weighted,
        Method::Ward,
        Method::Centroid,
        Method::Median,
    ];

    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Single => MethodKind::Single,
            Method::Complete => MethodKind::Complete,
            Method::Average => MethodKind::Average,
            Method::Weighted => MethodKind::Weighted,
            Method::Ward => MethodKind::Ward,
            Method::Centroid => MethodKind::Centroid,
            Method::Median => MethodKind::Median,
            Method::Flexible(_) => MethodKind::Flexible,
        }
    }

    /// True for the schemes whose dendrograms can contain inversions.
    pub fn may_invert(&self) -> bool {
        matches!(self, Method::Centroid | Method::Median | Method::Flexible(_))
    }

    /// True for the geometric schemes, whose updates run on squared
    /// dissimilarities internally.
    pub fn uses_squared(&self) -> bool {
        matches!(self, Method::Ward | Method::Centroid | Method::Median)
    }

    /// True if the update treats the two merged clusters interchangeably.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Method::Flexible(c) => c.alpha_i == c.alpha_j,
            _ => true,
        }
    }

    /// Converts an input dissimilarity into the internal working scale.
    #[inline]
    pub fn to_internal(&self, d: f64) -> f64 {
        if self.uses_squared() {
            d * d
        } else {
            d
        }
    }

    /// Converts an internal working value into an emitted merge height.
    #[inline]
    pub fn to_external(&self, d: f64) -> f64 {
        if self.uses_squared() {
            d.sqrt()
        } else {
            d
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Single => "single",
            Method::Complete => "complete",
            Method::Average => "average",
            Method::Weighted => "weighted",
            Method::Ward => "ward",
            Method::Centroid => "centroid",
            Method::Median => "median",
            Method::Flexible(_) => "flexible",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Flexible(c) => write!(f, "flexible:{},{},{},{}", c.alpha_i, c.alpha_j, c.beta, c.gamma),
            m => f.write_str(m.name()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Parses a named method or `flexible:aI,aJ,b,g`.
    fn from_str(s: &str) -> Result<Method, Error> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("flexible:") {
            let coefficients = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| Error::InvalidArgument(format!("bad flexible coefficient: {}", e)))?;
            if coefficients.len() != 4 || coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "flexible needs four finite coefficients aI,aJ,b,g, got '{}'",
                    rest
                )));
            }
            return Ok(Method::Flexible(FlexibleCoefficients::new(
                coefficients[0],
                coefficients[1],
                coefficients[2],
                coefficients[3],
            )));
        }
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Method::Single),
            "complete" => Ok(Method::Complete),
            "average" => Ok(Method::Average),
            "weighted" => Ok(Method::Weighted),
            "ward" => Ok(Method::Ward),
            "centroid" => Ok(Method::Centroid),
            "median" => Ok(Method::Median),
            _ => Err(Error::InvalidArgument(format!("unrecognized method '{}'", s))),
        }
    }
}

//! Edge-weight dynamics along the ideal triangulation sweep of a
//! once-punctured torus bundle, periodic weight systems and the hyperbolic
//! volume of the mapping torus.

mod solve;

pub use solve::{
    llr_family_relation, solve_hyperbolic, solve_hyperbolic_seeded, solve_periodic_llr,
    solve_periodic_multistart, solve_periodic_newton, Branch, Family, HyperbolicOptions,
};

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::dilog::bloch_wigner;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    /// `-1` for `L`, `+1` for `R`.
    pub fn sign(self) -> i64 {
        match self {
            Letter::L => -1,
            Letter::R => 1,
        }
    }
}

/// `phi = phi_1 o ... o phi_k0 o J^eps` with each `phi_k` in `{L, R}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyWord {
    letters: Vec<Letter>,
    eps: u8,
}

impl MonodromyWord {
    pub fn new(letters: Vec<Letter>, eps: u8) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("monodromy word is empty".into()));
        }
        if eps > 1 {
            return Err(Error::InvalidInput(format!("J exponent must be 0 or 1, got {eps}")));
        }
        Ok(Self { letters, eps })
    }

    pub fn parse(s: &str, eps: u8) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'L' => Ok(Letter::L),
                'R' => Ok(Letter::R),
                other => Err(Error::InvalidInput(format!("unexpected letter {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, eps)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn eps(&self) -> u8 {
        self.eps
    }

    pub fn is_pseudo_anosov(&self) -> bool {
        self.letters.contains(&Letter::L) && self.letters.contains(&Letter::R)
    }

    pub fn require_pseudo_anosov(&self) -> Result<()> {
        if self.is_pseudo_anosov() {
            Ok(())
        } else {
            Err(Error::NotPseudoAnosov(self.to_string()))
        }
    }

    /// Cyclic rotation by `shift` letters to the left.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.rotate_left(shift % self.letters.len());
        Self { letters, eps: self.eps }
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::L => "L",
                Letter::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for MonodromyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 0)
    }
}

/// Complex weights on the edges `e, f, g` of one triangulation in the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeights {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl EdgeWeights {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        for (name, w) in [("a", a), ("b", b), ("c", c)] {
            if w.norm() == 0.0 || !w.re.is_finite() || !w.im.is_finite() {
                return Err(Error::InvalidInput(format!("edge weight {name} = {w} is not a nonzero finite number")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn product(&self) -> Complex64 {
        self.a * self.b * self.c
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.conj(), b: self.b.conj(), c: self.c.conj() }
    }

    /// Componentwise `|w - w'| / (1 + |w|)`, maximised.
    pub fn distance(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(x, y)| (x - y).norm() / (1.0 + x.norm()))
            .fold(0.0, f64::max)
    }
}

impl Serialize for EdgeWeights {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let arr: [[f64; 2]; 3] = self.as_array().map(|z| [z.re, z.im]);
        arr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeWeights {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c] = <[[f64; 2]; 3]>::deserialize(d)?;
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        EdgeWeights::new(z(a), z(b), z(c)).map_err(serde::de::Error::custom)
    }
}

/// One diagonal exchange followed by the relabelling attached to `letter`.
pub fn step(w: &EdgeWeights, letter: Letter) -> Result<EdgeWeights> {
    let flipped = match letter {
        Letter::L => w.b,
        Letter::R => w.c,
    };
    let one_plus = ONE + flipped;
    if flipped.norm() == 0.0 {
        return Err(Error::InvalidInput("flipped edge weight is zero".into()));
    }
    if one_plus.norm() <= 1e-14 * (1.0 + flipped.norm()) {
        return Err(Error::DegenerateWeight(format!("flipped edge weight {flipped} equals -1")));
    }
    let sq = one_plus * one_plus;
    let next = match letter {
        Letter::L => EdgeWeights { a: w.b.inv(), b: sq * w.a, c: w.b * w.b * w.c / sq },
        Letter::R => EdgeWeights { a: w.c.inv(), b: sq * w.b, c: w.c * w.c * w.a / sq },
    };
    EdgeWeights::new(next.a, next.b, next.c)
}

/// Edge weights `(a_k, b_k, c_k)` for `k = 0..=k0` along the sweep of a word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepWeights {
    #[serde(serialize_with = "word_as_string")]
    pub word: MonodromyWord,
    pub steps: Vec<EdgeWeights>,
}

fn word_as_string<S: Serializer>(w: &MonodromyWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("letters", &w.to_string())?;
    m.serialize_entry("eps", &w.eps())?;
    m.end()
}

#[derive(Deserialize)]
struct SweepRepr {
    word: WordRepr,
    steps: Vec<EdgeWeights>,
}

#[derive(Deserialize)]
struct WordRepr {
    letters: String,
    eps: u8,
}

impl<'de> Deserialize<'de> for SweepWeights {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SweepRepr::deserialize(d)?;
        let word = MonodromyWord::parse(&r.word.letters, r.word.eps).map_err(serde::de::Error::custom)?;
        if r.steps.len() != word.len() + 1 {
            return Err(serde::de::Error::custom("sweep must have one more step than letters"));
        }
        Ok(SweepWeights { word, steps: r.steps })
    }
}

impl SweepWeights {
    pub fn initial(&self) -> &EdgeWeights {
        &self.steps[0]
    }

    pub fn last(&self) -> &EdgeWeights {
        self.steps.last().expect("sweep is nonempty")
    }

    /// Distance between the last and first weight systems.
    pub fn periodicity_defect(&self) -> f64 {
        self.initial().distance(self.last())
    }

    pub fn is_periodic(&self, tol: f64) -> bool {
        self.periodicity_defect() < tol
    }

    /// Largest relative drift of `a_k b_k c_k` from its initial value.
    pub fn product_drift(&self) -> f64 {
        let p0 = self.initial().product();
        self.steps.iter().map(|w| (w.product() - p0).norm() / p0.norm()).fold(0.0, f64::max)
    }

    /// The sweep of the rotated word starting from `steps[shift]`.
    pub fn rotated(&self, shift: usize) -> Result<Self> {
        let k0 = self.word.len();
        sweep(&self.word.rotated(shift), self.steps[shift % k0])
    }
}

/// Runs the recursion along the word. Periodicity is not required.
pub fn sweep(word: &MonodromyWord, initial: EdgeWeights) -> Result<SweepWeights> {
    let mut steps = Vec::with_capacity(word.len() + 1);
    steps.push(initial);
    for (idx, &letter) in word.letters().iter().enumerate() {
        let next = step(&steps[idx], letter).map_err(|e| Error::DegenerateStep {
            index: idx + 1,
            reason: e.to_string(),
        })?;
        steps.push(next);
    }
    Ok(SweepWeights { word: word.clone(), steps })
}

/// Tetrahedron shape attached to each letter: minus the weight of the edge
/// being flipped (`b` before an `L`, `c` before an `R`).
pub fn tetra_shapes(s: &SweepWeights) -> Vec<Complex64> {
    s.word
        .letters()
        .iter()
        .zip(&s.steps)
        .map(|(l, w)| match l {
            Letter::L => -w.b,
            Letter::R => -w.c,
        })
        .collect()
}

/// Shapes and volume of the layered triangulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeomResult {
    #[serde(with = "crate::serde_complex::vec")]
    pub shapes: Vec<Complex64>,
    pub volume: f64,
}

/// `|sum_k D(z_k)|` over the shapes of a sweep.
pub fn shapes_volume(s: &SweepWeights) -> Result<GeomResult> {
    let shapes = tetra_shapes(s);
    let total: f64 = shapes.iter().map(|&z| bloch_wigner(z)).sum::<Result<f64>>()?;
    Ok(GeomResult { shapes, volume: total.abs() })
}

/// Hyperbolic volume of the mapping torus of a pseudo-Anosov word.
pub fn volume(word: &MonodromyWord) -> Result<f64> {
    hyperbolic_geometry(word, &HyperbolicOptions::default()).map(|g| g.volume)
}

pub fn hyperbolic_geometry(word: &MonodromyWord, opts: &HyperbolicOptions) -> Result<GeomResult> {
    let s = solve_hyperbolic_seeded(word, opts)?;
    shapes_volume(&s)
}

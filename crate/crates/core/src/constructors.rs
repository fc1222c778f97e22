//! Named correlations: the GHZ box, the one-parameter families with one-way
//! signaling decompositions, PR boxes, deterministic strategies and noise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::{mix, Box1, Box2, Box3};

const UNIT_TOL: f64 = 1e-12;

/// Dichotomic qubit observable `n . sigma`; outcome +1 is reported as bit 0
/// and -1 as bit 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    bloch: [f64; 3],
}

impl Observable {
    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let norm = bloch.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "Bloch vector {bloch:?} has norm {norm}, expected 1"
            )));
        }
        Ok(Self { bloch })
    }

    pub fn sigma_x() -> Self {
        Self { bloch: [1.0, 0.0, 0.0] }
    }

    pub fn sigma_z() -> Self {
        Self { bloch: [0.0, 0.0, 1.0] }
    }

    /// `(sigma_z + sigma_x) / sqrt 2`
    pub fn diag_plus() -> Self {
        Self { bloch: [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2] }
    }

    /// `(sigma_z - sigma_x) / sqrt 2`
    pub fn diag_minus() -> Self {
        Self { bloch: [-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2] }
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// Rank-1 projector `(I + s n.sigma) / 2` onto outcome `bit`.
    fn projector(&self, bit: u8) -> [[Complex64; 2]; 2] {
        let s = if bit == 0 { 1.0 } else { -1.0 };
        let [x, y, z] = self.bloch;
        [
            [Complex64::new(0.5 * (1.0 + s * z), 0.0), Complex64::new(0.5 * s * x, -0.5 * s * y)],
            [Complex64::new(0.5 * s * x, 0.5 * s * y), Complex64::new(0.5 * (1.0 - s * z), 0.0)],
        ]
    }
}

/// Two observables (input 0, input 1) for each of the three parties.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAssignment {
    pub parties: [[Observable; 2]; 3],
}

impl MeasurementAssignment {
    pub fn new(parties: [[Observable; 2]; 3]) -> Self {
        Self { parties }
    }

    /// `{sigma_z, sigma_x}`
    pub fn computational_pair() -> [Observable; 2] {
        [Observable::sigma_z(), Observable::sigma_x()]
    }

    /// `{(sigma_z + sigma_x)/sqrt 2, (sigma_z - sigma_x)/sqrt 2}`
    pub fn diagonal_pair() -> [Observable; 2] {
        [Observable::diag_plus(), Observable::diag_minus()]
    }

    /// Parties 2 and 3 exchange their measurement pairs.
    pub fn swapped_23(&self) -> Self {
        let [a, b, c] = self.parties;
        Self { parties: [a, c, b] }
    }
}

impl Default for MeasurementAssignment {
    /// Parties 1 and 2 measure `{sigma_z, sigma_x}`, party 3 the diagonal pair.
    fn default() -> Self {
        let m = Self::computational_pair();
        Self { parties: [m, m, Self::diagonal_pair()] }
    }
}

/// Applies a single-qubit operator to qubit `q` (0 = most significant).
fn apply_1q(state: &mut [Complex64; 8], op: &[[Complex64; 2]; 2], q: usize) {
    let stride = 1 << (2 - q);
    for base in 0..8 {
        if base & stride != 0 {
            continue;
        }
        let (a, b) = (state[base], state[base | stride]);
        state[base] = op[0][0] * a + op[0][1] * b;
        state[base | stride] = op[1][0] * a + op[1][1] * b;
    }
}

/// Outcome statistics of projective measurements on `(|000> + |111>)/sqrt 2`.
pub fn ghz_box(m: &MeasurementAssignment) -> Box3 {
    let mut ghz = [Complex64::new(0.0, 0.0); 8];
    ghz[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ghz[7] = Complex64::new(FRAC_1_SQRT_2, 0.0);

    let mut rows = [[0.0; 8]; 8];
    for ins in 0..8usize {
        let inputs = [ins >> 2, (ins >> 1) & 1, ins & 1];
        for outs in 0..8usize {
            let outputs = [(outs >> 2) as u8, ((outs >> 1) & 1) as u8, (outs & 1) as u8];
            let mut phi = ghz;
            for party in 0..3 {
                let proj = m.parties[party][inputs[party]].projector(outputs[party]);
                apply_1q(&mut phi, &proj, party);
            }
            rows[ins][outs] = phi.iter().map(|c| c.norm_sqr()).sum();
        }
    }
    Box3::new(rows).expect("projective statistics form a valid box")
}

/// Noise parameter of the one-way-signaling families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsParams {
    eps: f64,
}

impl EpsParams {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("eps = {eps} outside [0, 1]")));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k_plus(&self) -> f64 {
        (1.0 + self.eps) / 4.0
    }

    pub fn k_minus(&self) -> f64 {
        (1.0 - self.eps) / 4.0
    }
}

// Reference patterns before the global factor 1/2:
// 'P' = 2k+, 'M' = 2k-, 'p' = k+, 'm' = k-, '0' = 0.
const LEFT_PATTERN: [&str; 8] = [
    "PM0000MP", "PM0000MP", "pmpmmpmp", "pmpmmpmp", "pmmppmmp", "pmmppmmp", "pmmpmppm", "mppmpmmp",
];
const RIGHT_PATTERN: [&str; 8] = [
    "P0M00M0P", "ppmmmmpp", "P0M00M0P", "ppmmmmpp", "pmmppmmp", "pmmpmppm", "pmmppmmp", "mppmpmmp",
];

fn from_pattern(pattern: &[&str; 8], e: &EpsParams) -> Box3 {
    let (kp, km) = (e.k_plus(), e.k_minus());
    let mut rows = [[0.0; 8]; 8];
    for (row, pat) in rows.iter_mut().zip(pattern) {
        for (v, ch) in row.iter_mut().zip(pat.chars()) {
            *v = 0.5
                * match ch {
                    'P' => 2.0 * kp,
                    'M' => 2.0 * km,
                    'p' => kp,
                    'm' => km,
                    _ => 0.0,
                };
        }
    }
    Box3::new(rows).expect("family members are valid boxes")
}

/// Member of the family decomposable with 3-to-2 one-way signaling terms.
/// At `eps = 1/sqrt 2` this is the default GHZ box.
pub fn p_eps_left(e: &EpsParams) -> Box3 {
    from_pattern(&LEFT_PATTERN, e)
}

/// Member of the family decomposable with 2-to-3 one-way signaling terms.
pub fn p_eps_right(e: &EpsParams) -> Box3 {
    from_pattern(&RIGHT_PATTERN, e)
}

/// `alpha * p_eps_left + (1 - alpha) * p_eps_right`.
pub fn p_eps_alpha(e: &EpsParams, alpha: f64) -> Result<Box3> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::BadWeights(format!("alpha = {alpha} outside [0, 1]")));
    }
    mix(&[p_eps_left(e), p_eps_right(e)], &[alpha, 1.0 - alpha])
}

pub fn noise_box() -> Box3 {
    Box3::uniform()
}

fn check_bit(name: &str, v: u8) -> Result<u8> {
    if v > 1 {
        return Err(Error::InvalidParameter(format!("{name} = {v} is not a bit")));
    }
    Ok(v)
}

/// Deterministic response to one input bit, stored as a truth table:
/// the output for input `i` is bit `i` of the code (0..4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitFn(u8);

impl BitFn {
    pub const ZERO: BitFn = BitFn(0b00);
    pub const NOT: BitFn = BitFn(0b01);
    pub const IDENTITY: BitFn = BitFn(0b10);
    pub const ONE: BitFn = BitFn(0b11);

    pub fn new(code: u8) -> Result<Self> {
        if code >= 4 {
            return Err(Error::InvalidParameter(format!("one-bit function code {code} not in 0..4")));
        }
        Ok(Self(code))
    }

    pub fn from_fn(f: impl Fn(u8) -> u8) -> Self {
        Self((f(0) & 1) | ((f(1) & 1) << 1))
    }

    pub fn all() -> impl Iterator<Item = BitFn> {
        (0..4).map(BitFn)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn eval(self, i: u8) -> u8 {
        (self.0 >> i) & 1
    }
}

/// Deterministic response to an input pair `(i2, i3)`: the output is bit
/// `2*i2 + i3` of the code (0..16).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairFn(u8);

impl PairFn {
    pub fn new(code: u8) -> Result<Self> {
        if code >= 16 {
            return Err(Error::InvalidParameter(format!("two-bit function code {code} not in 0..16")));
        }
        Ok(Self(code))
    }

    pub fn from_fn(f: impl Fn(u8, u8) -> u8) -> Self {
        let mut code = 0;
        for i2 in 0..2 {
            for i3 in 0..2 {
                code |= (f(i2, i3) & 1) << (2 * i2 + i3);
            }
        }
        Self(code)
    }

    pub fn all() -> impl Iterator<Item = PairFn> {
        (0..16).map(PairFn)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn eval(self, i2: u8, i3: u8) -> u8 {
        (self.0 >> (2 * i2 + i3)) & 1
    }
}

/// Direction in which a one-way signaling bipartite term may signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signaling {
    /// Party 3's output may depend on party 2's input (`p_{2->3}`).
    TwoToThree,
    /// Party 2's output may depend on party 3's input (`p_{2<-3}`).
    ThreeToTwo,
}

/// PR box variant: `o xor o' = i.i' xor a.i xor b.i' xor g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrVariant {
    pub a: u8,
    pub b: u8,
    pub g: u8,
}

impl PrVariant {
    pub fn new(a: u8, b: u8, g: u8) -> Result<Self> {
        Ok(Self { a: check_bit("a", a)?, b: check_bit("b", b)?, g: check_bit("g", g)? })
    }

    pub fn all() -> impl Iterator<Item = PrVariant> {
        (0..8u8).map(|c| PrVariant { a: c >> 2, b: (c >> 1) & 1, g: c & 1 })
    }
}

impl fmt::Display for PrVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PR({},{},{})", self.a, self.b, self.g)
    }
}

pub fn pr_box(v: PrVariant) -> Box2 {
    let mut rows = [[0.0; 4]; 4];
    for i in 0..2u8 {
        for j in 0..2u8 {
            let parity = (i & j) ^ (v.a & i) ^ (v.b & j) ^ v.g;
            for o in 0..2u8 {
                rows[(2 * i + j) as usize][(2 * o + (o ^ parity)) as usize] = 0.5;
            }
        }
    }
    Box2::new(rows).expect("PR box is valid")
}

pub fn det_box1(f: BitFn) -> Box1 {
    let mut rows = [[0.0; 2]; 2];
    for i in 0..2u8 {
        rows[i as usize][f.eval(i) as usize] = 1.0;
    }
    Box1::new(rows).expect("deterministic table is valid")
}

fn det_box2(resp: impl Fn(u8, u8) -> (u8, u8)) -> Box2 {
    let mut rows = [[0.0; 4]; 4];
    for i2 in 0..2u8 {
        for i3 in 0..2u8 {
            let (o2, o3) = resp(i2, i3);
            rows[(2 * i2 + i3) as usize][(2 * o2 + o3) as usize] = 1.0;
        }
    }
    Box2::new(rows).expect("deterministic table is valid")
}

/// `o2 = f(i2)`, `o3 = g(i3)`.
pub fn det_box2_local(f: BitFn, g: BitFn) -> Box2 {
    det_box2(|i2, i3| (f.eval(i2), g.eval(i3)))
}

/// One-way deterministic box. For `TwoToThree`: `o2 = local(i2)`,
/// `o3 = joint(i2, i3)`. For `ThreeToTwo`: `o3 = local(i3)`,
/// `o2 = joint(i2, i3)`.
pub fn det_box2_oneway(dir: Signaling, local: BitFn, joint: PairFn) -> Box2 {
    match dir {
        Signaling::TwoToThree => det_box2(|i2, i3| (local.eval(i2), joint.eval(i2, i3))),
        Signaling::ThreeToTwo => det_box2(|i2, i3| (joint.eval(i2, i3), local.eval(i3))),
    }
}

/// `o2 = f(i2, i3)`, `o3 = g(i2, i3)`.
pub fn det_box2_twoway(f: PairFn, g: PairFn) -> Box2 {
    det_box2(|i2, i3| (f.eval(i2, i3), g.eval(i2, i3)))
}

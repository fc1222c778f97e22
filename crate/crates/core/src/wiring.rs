//! Deterministic wirings inside the lab holding parties 2 and 3, collapsing a
//! tripartite box to a bipartite box across the 1|23 cut.

use serde::{Deserialize, Serialize};

use crate::constructors::BitFn;
use crate::tensor::{Box2, Box3, NEG_TOL};

/// One of the two parties inside the joint lab.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mover {
    Two,
    Three,
}

impl Mover {
    fn other(self) -> Mover {
        match self {
            Mover::Two => Mover::Three,
            Mover::Three => Mover::Two,
        }
    }
}

/// The lab's input `j` feeds the first mover through `input_map`; the first
/// mover's output, passed through `relay_map`, becomes the second mover's
/// input; the lab reports the output of `output_select` and discards the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringSpec {
    pub first_mover: Mover,
    pub input_map: BitFn,
    pub relay_map: BitFn,
    pub output_select: Mover,
}

impl WiringSpec {
    /// Party 2 measures on the lab input, party 3 measures on `o2`.
    pub const TWO_TO_THREE: WiringSpec = WiringSpec {
        first_mover: Mover::Two,
        input_map: BitFn::IDENTITY,
        relay_map: BitFn::IDENTITY,
        output_select: Mover::Three,
    };

    /// Party 3 measures on the lab input, party 2 measures on `o3`.
    pub const THREE_TO_TWO: WiringSpec = WiringSpec {
        first_mover: Mover::Three,
        input_map: BitFn::IDENTITY,
        relay_map: BitFn::IDENTITY,
        output_select: Mover::Two,
    };
}

/// `q(o1, o | i1, j)` for an arbitrary deterministic wiring.
pub fn wire_general(b: &Box3, w: &WiringSpec) -> Box2 {
    let second = w.first_mover.other();
    let mut rows = [[0.0; 4]; 4];
    for i1 in 0..2u8 {
        for j in 0..2u8 {
            let first_in = w.input_map.eval(j);
            for o1 in 0..2u8 {
                for o_first in 0..2u8 {
                    let second_in = w.relay_map.eval(o_first);
                    for o_second in 0..2u8 {
                        let (i2, i3, o2, o3) = match w.first_mover {
                            Mover::Two => (first_in, second_in, o_first, o_second),
                            Mover::Three => (second_in, first_in, o_second, o_first),
                        };
                        let lab_out = if w.output_select == w.first_mover {
                            o_first
                        } else {
                            debug_assert_eq!(w.output_select, second);
                            o_second
                        };
                        rows[(2 * i1 + j) as usize][(2 * o1 + lab_out) as usize] +=
                            b.p([o1, o2, o3], [i1, i2, i3]);
                    }
                }
            }
        }
    }
    Box2::with_tol(rows, NEG_TOL).expect("wiring a valid box yields a valid box")
}

/// `q(o1, o3 | i1, j) = sum_{o2} p(o1 o2 o3 | i1, i2 = j, i3 = o2)`.
pub fn wire_2to3(b: &Box3) -> Box2 {
    wire_general(b, &WiringSpec::TWO_TO_THREE)
}

/// `q(o1, o2 | i1, j) = sum_{o3} p(o1 o2 o3 | i1, i2 = o3, i3 = j)`.
pub fn wire_3to2(b: &Box3) -> Box2 {
    wire_general(b, &WiringSpec::THREE_TO_TWO)
}

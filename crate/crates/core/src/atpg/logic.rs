//! Five-valued logic for single-fault reasoning.
//!
//! Each value tracks a (good, faulty) pair of ternary Booleans: `D` is
//! good 1 / faulty 0, `Dbar` the reverse, and `X` any pair with an unknown
//! half. Gate evaluation happens plane-wise — evaluate the good parts and
//! the faulty parts separately in ternary logic, then recombine — which
//! keeps the algebra consistent with pairwise Boolean evaluation by
//! construction.

use std::fmt;

use crate::circuit::GateKind;

/// Ternary Boolean: `None` is unknown.
pub type Ternary = Option<bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value5 {
    Zero,
    One,
    X,
    /// Good circuit 1, faulty circuit 0.
    D,
    /// Good circuit 0, faulty circuit 1.
    Dbar,
}

impl Value5 {
    pub fn from_bool(v: bool) -> Value5 {
        if v {
            Value5::One
        } else {
            Value5::Zero
        }
    }

    /// Value in the fault-free circuit.
    pub fn good(self) -> Ternary {
        match self {
            Value5::Zero | Value5::Dbar => Some(false),
            Value5::One | Value5::D => Some(true),
            Value5::X => None,
        }
    }

    /// Value in the faulty circuit.
    pub fn faulty(self) -> Ternary {
        match self {
            Value5::Zero | Value5::D => Some(false),
            Value5::One | Value5::Dbar => Some(true),
            Value5::X => None,
        }
    }

    /// Recombines per-plane ternary values; any unknown half collapses to
    /// `X`.
    pub fn compose(good: Ternary, faulty: Ternary) -> Value5 {
        match (good, faulty) {
            (Some(false), Some(false)) => Value5::Zero,
            (Some(true), Some(true)) => Value5::One,
            (Some(true), Some(false)) => Value5::D,
            (Some(false), Some(true)) => Value5::Dbar,
            _ => Value5::X,
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Value5::Zero | Value5::One)
    }

    /// True for `D` and `Dbar`: the fault effect is present here.
    pub fn is_fault_effect(self) -> bool {
        matches!(self, Value5::D | Value5::Dbar)
    }
}

impl fmt::Display for Value5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value5::Zero => "0",
            Value5::One => "1",
            Value5::X => "X",
            Value5::D => "D",
            Value5::Dbar => "D'",
        })
    }
}

/// Ternary gate evaluation: controlling values decide early, otherwise any
/// unknown input makes the output unknown.
pub fn eval3(kind: GateKind, inputs: &[Ternary]) -> Ternary {
    let base = |controlling: bool, invert: bool, inputs: &[Ternary]| -> Ternary {
        if inputs.contains(&Some(controlling)) {
            Some(controlling ^ invert)
        } else if inputs.iter().any(|v| v.is_none()) {
            None
        } else {
            Some(!controlling ^ invert)
        }
    };
    match kind {
        GateKind::And => base(false, false, inputs),
        GateKind::Nand => base(false, true, inputs),
        GateKind::Or => base(true, false, inputs),
        GateKind::Nor => base(true, true, inputs),
        GateKind::Not => inputs[0].map(|v| !v),
        GateKind::Buf => inputs[0],
        GateKind::Xor | GateKind::Xnor => {
            let parity = inputs
                .iter()
                .try_fold(false, |acc, v| v.map(|b| acc ^ b));
            parity.map(|p| p ^ (kind == GateKind::Xnor))
        }
    }
}

/// Five-valued gate evaluation via plane-wise ternary evaluation.
pub fn eval5(kind: GateKind, inputs: &[Value5]) -> Value5 {
    let goods: Vec<Ternary> = inputs.iter().map(|v| v.good()).collect();
    let faults: Vec<Ternary> = inputs.iter().map(|v| v.faulty()).collect();
    Value5::compose(eval3(kind, &goods), eval3(kind, &faults))
}

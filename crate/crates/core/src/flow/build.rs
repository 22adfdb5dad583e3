use std::sync::Arc;

use super::{Flow, FlowBuilder, FlowMorphism};
use crate::finset::FinSet;

/// Label of the unique path of the directed segment.
pub const SEGMENT_PATH: &str = "[0,1]";

/// `Glob(Z)`: states `{0,1}`, `P_{0,1} = Z`, nothing composable.
pub fn glob(z: &FinSet) -> Flow {
    let mut b = FlowBuilder::new(FinSet::range(2));
    for label in z.iter() {
        b.path_by_index(0, 1, label);
    }
    b.build().expect("a globe is always a flow")
}

/// The directed segment `I = Glob({[0,1]})`.
pub fn directed_segment() -> Flow {
    glob(&FinSet::singleton(SEGMENT_PATH))
}

/// `Glob(Z) * Glob(T)`: the final state of the first globe glued to the initial state of
/// the second, with the composites `(z,t)` freely added in `P_{0,2}`.
pub fn concat_globes(z: &FinSet, t: &FinSet) -> Flow {
    let mut b = FlowBuilder::new(FinSet::range(3));
    let zs: Vec<usize> = z.iter().map(|l| b.path_by_index(0, 1, l)).collect();
    let ts: Vec<usize> = t.iter().map(|l| b.path_by_index(1, 2, l)).collect();
    for (zi, zl) in zs.iter().zip(z.iter()) {
        for (ti, tl) in ts.iter().zip(t.iter()) {
            let zt = b.path_by_index(0, 2, format!("({zl},{tl})"));
            b.compose(*zi, *ti, zt);
        }
    }
    b.build().expect("concatenation of globes is a flow")
}

/// `(I, I*I)` sharing the path label of the directed segment.
pub fn segment_pair() -> (Arc<Flow>, Arc<Flow>) {
    let seg = FinSet::singleton(SEGMENT_PATH);
    (Arc::new(glob(&seg)), Arc::new(concat_globes(&seg, &seg)))
}

/// The subdivision `φ : I → I*I`, `0 ↦ 0`, `1 ↦ 2`, `[0,1] ↦ [0,1]*[0,1]`.
pub fn phi() -> FlowMorphism {
    let (i, ii) = segment_pair();
    let composite = format!("({SEGMENT_PATH},{SEGMENT_PATH})");
    FlowMorphism::from_labels(
        i,
        ii,
        &[("0", "0"), ("1", "2")],
        &[(("0", "1", SEGMENT_PATH), composite.as_str())],
    )
    .expect("phi is a morphism")
}

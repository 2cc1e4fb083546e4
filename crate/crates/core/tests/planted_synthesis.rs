//! Planted instances per hole length go through the whole pipeline, and
//! through synthesis around the planted hole.

use clawfree_core::decomp::{classify, DEFAULT_THRESHOLD};
use clawfree_core::gen::{plant, random_spec};
use clawfree_core::pattern::Hole;
use clawfree_core::synth::{synth_around, synthesize, Synthesis};

fn sweep(hole: usize, count: usize) -> Vec<String> {
    let (mut planted, mut errors) = (0, Vec::new());
    let mut seed = hole as u64 * 1_000_003;
    while planted < count {
        seed += 1;
        let mut spec = random_spec(hole, seed, 7, 12);
        spec.attempts = 5;
        let Ok(g) = plant(&spec) else { continue };
        planted += 1;
        match synthesize(&g) {
            Ok(Synthesis::Expression(r)) => {
                assert!(r.expr.evaluate().unwrap().matches(&g), "seed {seed}");
                assert!(r.width_achieved <= r.declared_bound, "seed {seed}");
            }
            Ok(Synthesis::Perfect(_)) => errors.push(format!("seed {seed}: perfect")),
            Err(e) => errors.push(format!("seed {seed}: {e}")),
        }
        let d = classify(&g, &Hole((0..hole).collect()), DEFAULT_THRESHOLD).unwrap();
        match synth_around(&g, &d) {
            Ok(r) => assert!(r.expr.evaluate().unwrap().matches(&g), "seed {seed}"),
            Err(e) => errors.push(format!("seed {seed} around the planted hole: {e}")),
        }
    }
    errors
}

#[test]
fn planted_five_holes() {
    let errors = sweep(5, 40);
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn planted_six_holes() {
    let errors = sweep(6, 40);
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn planted_seven_holes() {
    let errors = sweep(7, 40);
    assert!(errors.is_empty(), "{errors:#?}");
}

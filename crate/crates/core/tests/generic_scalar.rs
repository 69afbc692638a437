//! The engine is generic over the scalar; these tests instantiate the main
//! paths at f32 and check them against the looser f32 tolerances.

use qgames::channels::{make_channel, ChannelKind};
use qgames::equilibria::{classical_random_payoff, mg_ne_profile};
use qgames::games::{play_penny_flip, profile_payoffs, GameSpec};
use qgames::qops::{meyer_u, EntanglerSpec};
use qgames::qstate::StateVector;
use qgames::scalar::cx;

#[test]
fn penny_flip_in_f32() {
    let h = std::f32::consts::FRAC_1_SQRT_2 as f64;
    let q = meyer_u::<f32>(cx(h, 0.0), cx(h, 0.0)).unwrap();
    let outcome = play_penny_flip(&q, 0.5f32, &q).unwrap();
    assert!((outcome.prob_heads - 1.0).abs() < 1e-5);
    assert!((outcome.value_to_p + 1.0).abs() < 1e-5);
}

#[test]
fn ghz_preparation_in_f32() {
    let ghz = EntanglerSpec::<f32>::maximal(3)
        .apply_vec(&StateVector::zero_qubits(3), false)
        .unwrap();
    let probs = ghz.probabilities();
    assert!((probs[0] - 0.5).abs() < 1e-6);
    assert!((probs[7] - 0.5).abs() < 1e-6);
}

#[test]
fn minority_ne_payoff_in_f32() {
    let game = GameSpec::<f32>::minority(4, std::f32::consts::FRAC_PI_2).unwrap();
    let payoff = profile_payoffs(&game, &mg_ne_profile(4, 0).unwrap()).unwrap()[0];
    assert!((payoff - 0.25).abs() < 1e-5, "payoff {payoff}");
    assert_eq!(classical_random_payoff::<f32>(4).unwrap(), 0.125);
}

#[test]
fn channels_complete_in_f32() {
    for kind in ChannelKind::ALL {
        let ch = make_channel::<f32>(kind, 0.3f32).unwrap();
        assert!(ch.completeness_residual() < 1e-4);
    }
}

use idealgames::game::{evaluate, evaluate_partial, legality_check, play, GameKind, Move, Status, Transcript, WindowPolicy};
use idealgames::ideals::IdealSpec;
use idealgames::strategies::{build, replay, replays_identically, role_of, STRATEGY_NAMES};
use proptest::prelude::*;

fn run(game: GameKind, ideal: &str, i: &str, ii: &str, seed: u64, rounds: usize) -> Transcript {
    let ideal: IdealSpec = ideal.parse().unwrap();
    let first = build(i, seed).unwrap();
    let second = build(ii, seed).unwrap();
    play(game, &ideal, first.as_ref(), second.as_ref(), rounds, WindowPolicy::default_for(&ideal.ground())).unwrap()
}

const MATCHES: &[(GameKind, &str, &str, &str, usize)] = &[
    (GameKind::G1, "ed", "ed-cutter", "random-chooser", 8),
    (GameKind::G1, "pc", "bisect-cutter", "pc-chooser", 9),
    (GameKind::G1, "pc", "random-cutter", "pc-chooser", 9),
    (GameKind::G1, "r", "rado-cutter", "random-chooser", 5),
    (GameKind::G1, "edm:m=1", "random-cutter", "nontall-chooser", 6),
    (GameKind::Gfin, "ed", "random-cutter", "fsigma-chooser", 4),
    (GameKind::Gfin, "conv", "conv-cutter", "random-chooser", 6),
    (GameKind::Gfin, "somega:depth=3,n=0", "somega-cutter", "random-chooser", 3),
    (GameKind::G3, "somega:depth=3,n=1", "random-cutter", "g3-somega-chooser", 5),
];

#[test]
fn registry_names_build_and_have_roles() {
    for name in STRATEGY_NAMES {
        let s = build(name, 7).unwrap();
        assert!(s.id().starts_with(name), "{name}");
        role_of(name).unwrap();
    }
    assert!(build("no-such", 0).is_err());
    assert!(build("pc-chooser:bogus=1", 0).is_err());
}

#[test]
fn built_ids_rebuild_to_the_same_player() {
    for name in STRATEGY_NAMES {
        let id = build(name, 3).unwrap().id();
        assert_eq!(build(&id, 3).unwrap().id(), id);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn played_transcripts_are_legal_and_replay(k in 0..MATCHES.len(), seed in 0u64..500) {
        let (game, ideal, i, ii, rounds) = MATCHES[k];
        let t = run(game, ideal, i, ii, seed, rounds);
        prop_assert!(legality_check(&t).is_ok(), "{:?}", legality_check(&t));
        let finished = !matches!(t.status, Status::Illegal { .. } | Status::Running);
        prop_assert!(finished, "{:?}", t.status);
        let text = t.to_jsonl();
        prop_assert_eq!(Transcript::from_jsonl(&text).unwrap(), t.clone());
        prop_assert!(replays_identically(&text).unwrap());
        prop_assert_eq!(replay(&t).unwrap(), t);
    }

    #[test]
    fn partial_trajectory_is_a_prefix(k in 0..MATCHES.len(), seed in 0u64..200) {
        let (game, ideal, i, ii, rounds) = MATCHES[k];
        let t = run(game, ideal, i, ii, seed, rounds);
        let (vals, err) = evaluate_partial(&t, &t.header.ideal);
        match evaluate(&t, &t.header.ideal) {
            Ok(full) => prop_assert_eq!((vals, err), (full, None)),
            Err(_) => prop_assert!(err.is_some() && vals.len() < t.outcome_by_round().len()),
        }
    }

    #[test]
    fn tampered_choice_is_caught(seed in 0u64..200) {
        let mut t = run(GameKind::G1, "pc", "bisect-cutter", "pc-chooser", seed, 6);
        let pos = t.records.iter().position(|r| matches!(r.mv, Move::Choose { .. })).unwrap();
        if let Move::Choose { side, .. } = &mut t.records[pos].mv {
            *side = 1 - *side;
        }
        let v = legality_check(&t).unwrap_err();
        prop_assert_eq!(v.seq, pos);
    }
}

#[test]
fn trailer_is_required() {
    let t = run(GameKind::G1, "ed", "ed-cutter", "random-chooser", 1, 2);
    let text = t.to_jsonl();
    let header_only = text.lines().next().unwrap();
    assert!(Transcript::from_jsonl(header_only).is_err());
}

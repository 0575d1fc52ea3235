mod common;

use std::path::PathBuf;

use common::with_trivial_circle;
use kbsm_core::diagram::{make_move_pair, random_diagram, read_diagram, write_diagram, MoveKind, MoveSpec};
use kbsm_core::oracle::{bracket_recursive, bracket_recursive_with, check_invariance, SmoothingOrder};
use kbsm_core::ring::LaurentPoly;
use kbsm_core::state_sum::{bracket_raw_counted, kbsm_bracket};
use kbsm_core::words::Surface;

fn corpus() -> Vec<(String, String)> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect();
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_agrees_with_recursive_bracket() {
    for (name, text) in corpus() {
        let d = read_diagram(&text).unwrap().validate().unwrap();
        assert_eq!(bracket_recursive(&d), kbsm_bracket(&d), "{name}");
    }
}

#[test]
fn corpus_files_round_trip() {
    for (name, text) in corpus() {
        let d = read_diagram(&text).unwrap();
        let again = read_diagram(&write_diagram(&d)).unwrap();
        assert_eq!(d, again, "{name}");
        assert_eq!(write_diagram(&d), write_diagram(&again));
    }
}

#[test]
fn every_state_is_visited_once() {
    for seed in 0..10 {
        let d = random_diagram(Surface::Pants, 5, 2, seed);
        let (_, visited) = bracket_raw_counted(&d);
        assert_eq!(visited, 1 << d.crossing_count());
    }
}

#[test]
fn smoothing_order_does_not_matter() {
    for surface in Surface::ALL {
        for seed in 100..106 {
            let d = random_diagram(surface, 4, 3, seed);
            assert_eq!(
                bracket_recursive_with(&d, SmoothingOrder::Lowest),
                bracket_recursive_with(&d, SmoothingOrder::Highest)
            );
        }
    }
}

#[test]
fn trivial_circle_multiplies_by_delta() {
    for surface in Surface::ALL {
        for seed in 0..5 {
            let d = random_diagram(surface, 3, 3, seed);
            let bigger = with_trivial_circle(&d);
            assert_eq!(kbsm_bracket(&bigger), kbsm_bracket(&d).scale(&LaurentPoly::delta()));
        }
    }
}

#[test]
fn move_pairs_agree_outside_the_splice() {
    let base = random_diagram(Surface::Annulus, 3, 2, 4);
    for kind in MoveKind::ALL {
        let Ok(pair) = make_move_pair(&base, MoveSpec::new(kind), 11) else {
            continue;
        };
        let outside = |d: &kbsm_core::diagram::ValidatedDiagram| {
            let dg = d.diagram();
            let mut pts: Vec<_> =
                dg.components.iter().flatten().filter(|p| !pair.splice.contains(p)).cloned().collect();
            pts.sort();
            pts
        };
        assert_eq!(outside(&pair.left), outside(&pair.right), "{kind}");
    }
}

#[test]
fn a_few_invariance_trials_per_move() {
    for surface in Surface::ALL {
        let report = check_invariance(surface, &MoveKind::ALL, 3, 5);
        assert_eq!(report.trials.len(), 18);
        assert!(report.all_ok(), "{report}");
    }
}

#[test]
fn kink_factor_is_minus_a_cubed() {
    let base = random_diagram(Surface::Disk, 0, 1, 3);
    for (kind, exp) in [(MoveKind::Omega1Pos, 3), (MoveKind::Omega1Neg, -3)] {
        for variant in 0..kind.variants() {
            let pair = make_move_pair(&base, MoveSpec { kind, variant: Some(variant) }, 1).unwrap();
            assert_eq!(pair.factor, LaurentPoly::monomial(-1, exp));
            assert_eq!(pair.right.crossing_count(), pair.left.crossing_count() + 1);
            assert_eq!(kbsm_bracket(&pair.right), kbsm_bracket(&pair.left).scale(&pair.factor));
        }
    }
}

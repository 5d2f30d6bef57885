//! Hand-checked operator examples and known Hadamard matrices.

use std::collections::BTreeSet;
use std::path::PathBuf;

use hadamard_ga::engine::{crossover, mutate, CrossoverPlan, MutationPlan, Population};
use hadamard_ga::io::read_matrix_file;
use hadamard_ga::{fitness_f2, Execution, SignMatrix};

fn rows(r: &[&str]) -> SignMatrix {
    SignMatrix::from_sign_rows(r).unwrap()
}

#[test]
fn crossover_golden_pair() {
    let p1 = rows(&["-+++", "-+--", "+-+-", "+--+"]);
    let pn1 = rows(&["-+++", "+-++", "----", "++--"]);
    // N = 1: slots are P_1, P_{N+1}, O_1, O_{N+1}.
    let filler = SignMatrix::ones(4).unwrap();
    let mut pop = Population::from_matrices(&[p1.clone(), pn1.clone(), filler.clone(), filler]).unwrap();
    crossover(&mut pop, &CrossoverPlan::new(vec![3], 4).unwrap(), Execution::Sequential).unwrap();

    assert_eq!(pop.matrix(0), p1);
    assert_eq!(pop.matrix(1), pn1);
    assert_eq!(pop.matrix(2), rows(&["-+++", "-+-+", "+-+-", "+---"]));
    assert_eq!(pop.matrix(3), rows(&["-+++", "+-+-", "----", "++-+"]));
}

fn panel_matrices() -> [SignMatrix; 4] {
    [
        rows(&["++-++++-", "++----+-", "+-+++---", "++---+-+", "++-+-+++", "+-+-+-++", "+-+----+", "+-++++--"]),
        rows(&["+++-+-+-", "+-++--+-", "++++-++-", "+--+++-+", "++--++-+", "+-++---+", "++--+---", "+----+++"]),
        rows(&["+-+-+-+-", "++--+-++", "+++-----", "++-+---+", "+--+-+--", "+--+-+++", "++++++-+", "+-+-+++-"]),
        rows(&["+-----+-", "+++++-++", "+++++-+-", "+-+-++-+", "+--+---+", "++---++-", "+-++++-+", "++---+--"]),
    ]
}

/// Applies `plan` to the four panel matrices (as the offspring of an N = 2
/// population) and returns the cells that changed in each.
fn flipped_cells(plan: &MutationPlan) -> Vec<BTreeSet<(usize, usize)>> {
    let before = panel_matrices();
    let mut all = before.to_vec();
    all.extend(before.iter().cloned());
    let mut pop = Population::from_matrices(&all).unwrap();
    mutate(&mut pop, plan, Execution::Parallel).unwrap();
    (0..4)
        .map(|o| {
            let after = pop.matrix(4 + o);
            assert!(after.is_balanced());
            let mut set = BTreeSet::new();
            for i in 0..8 {
                for j in 0..8 {
                    if after.get(i, j) != before[o].get(i, j) {
                        set.insert((i, j));
                    }
                }
            }
            set
        })
        .collect()
}

fn cells(c: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    c.iter().copied().collect()
}

#[test]
fn panel_matrices_are_balanced() {
    for q in panel_matrices() {
        assert!(q.is_balanced());
    }
}

#[test]
fn mutation_golden_panels() {
    let columns = [vec![6, 5, 2], vec![5, 2, 4], vec![3, 1, 6], vec![2, 7, 6]];
    // Panel (a) pairs rows (6,5) and (3,1); see the next test for the
    // literal index arrays.
    let rows1 = [vec![6, 3], vec![4, 2], vec![0, 6], vec![1, 6]];
    let rows2 = [vec![5, 1], vec![7, 0], vec![1, 2], vec![2, 5]];
    let plan = MutationPlan::from_rows(&columns, &rows1, &rows2).unwrap();
    let got = flipped_cells(&plan);
    assert_eq!(got[0], cells(&[(1, 5), (3, 5), (1, 6), (3, 6), (5, 6), (6, 6)]));
    assert_eq!(got[1], cells(&[(0, 4), (2, 4), (0, 5), (2, 5), (4, 4), (7, 4)]));
    assert_eq!(got[2], cells(&[(0, 1), (1, 1), (2, 3), (6, 3)]));
    assert_eq!(got[3], cells(&[(5, 2), (6, 2), (1, 7), (2, 7), (5, 6), (6, 6), (5, 7), (6, 7)]));
}

#[test]
fn mutation_first_panel_with_published_index_arrays() {
    let columns = [vec![6, 5, 2], vec![5, 2, 4], vec![3, 1, 6], vec![2, 7, 6]];
    let rows1 = [vec![6, 5], vec![4, 2], vec![0, 6], vec![1, 6]];
    let rows2 = [vec![3, 1], vec![7, 0], vec![1, 2], vec![2, 5]];
    let plan = MutationPlan::from_rows(&columns, &rows1, &rows2).unwrap();
    let got = flipped_cells(&plan);
    assert_eq!(got[0], cells(&[(1, 2), (3, 2), (3, 5), (5, 2), (6, 2), (6, 5)]));
}

fn fixture(m: usize) -> SignMatrix {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", &format!("order{m}.txt")]
        .iter()
        .collect();
    read_matrix_file(path).unwrap()
}

#[test]
fn fixtures_are_normalized_hadamard_matrices() {
    for m in [20, 24, 28, 32] {
        let q = fixture(m);
        assert_eq!(q.order(), m);
        assert!(q.is_hadamard(), "order {m}");
        assert!(q.is_balanced(), "order {m}");
        assert_eq!(fitness_f2(&q).value(), 0);
    }
}

#[test]
fn any_single_flip_breaks_every_fixture() {
    for m in [20, 24, 28, 32] {
        let q = fixture(m);
        for i in 0..m {
            for j in 0..m {
                let mut bad = q.clone();
                bad.flip(i, j);
                assert!(!bad.is_hadamard(), "order {m}, flip ({i},{j})");
                // Every dot product involving column j moves from 0 to +-2.
                assert_eq!(fitness_f2(&bad).value(), 2 * (m as u64 - 1));
            }
        }
    }
}

use std::collections::BTreeSet;

use taufact_core::signatures::{
    atoms_in_table, generate_atom_table, write_table_csv, write_table_json, TableSpec, TableStream,
};

const GOLDEN_N7: &str = include_str!("golden/atoms-n7-m4-x0_0_1.json");

fn render_json(n: u64, max: u32, levels: &[u32]) -> String {
    let spec = TableSpec::new(n, max, levels, 1_000_000).unwrap();
    let mut buf = Vec::new();
    write_table_json(&mut buf, TableStream::new(spec)).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn n7_table_matches_golden_file() {
    assert_eq!(render_json(7, 4, &[0, 1]), GOLDEN_N7);
}

#[test]
fn n7_atoms_are_the_listed_families() {
    let table = generate_atom_table(7, 4, &[0, 1]).unwrap();
    assert_eq!(table.len(), 50);
    let atoms: BTreeSet<Vec<u32>> = atoms_in_table(&table)
        .iter()
        .map(|s| s.unit_counts().to_vec())
        .collect();
    let expected: BTreeSet<Vec<u32>> = [
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![1, 1, 0],
        vec![1, 0, 1],
        vec![0, 1, 1],
    ]
    .into_iter()
    .collect();
    assert_eq!(atoms, expected);
}

#[test]
fn n11_atoms_with_two_unit_factors() {
    let table = generate_atom_table(11, 4, &[0]).unwrap();
    let small: Vec<Vec<u32>> = atoms_in_table(&table)
        .iter()
        .filter(|s| s.total() <= 2)
        .map(|s| s.unit_counts().to_vec())
        .collect();
    // four single classes plus the six pairs of distinct classes
    assert_eq!(small.len(), 10);
    assert!(small.iter().all(|c| c[1..].iter().all(|&k| k <= 1)));
}

#[test]
fn streamed_output_is_deterministic() {
    assert_eq!(render_json(11, 3, &[0, 1]), render_json(11, 3, &[0, 1]));
    let spec = TableSpec::new(13, 2, &[0], 1_000_000).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_table_csv(&mut a, spec.q, TableStream::new(spec.clone())).unwrap();
    write_table_csv(&mut b, spec.q, TableStream::new(spec)).unwrap();
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 3usize.pow(5) + 1);
}

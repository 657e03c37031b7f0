//! Full-bundle regression against the shipped golden fixtures.

use std::path::Path;

use mineralcap::model::Model;
use mineralcap::report;

fn golden_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden")
}

#[test]
fn bundle_reproduces_every_golden_table() {
    let model = Model::load_default().expect("model loads");
    let bundle = report::run(&model).expect("bundle builds");
    let diff = report::diff_against_golden(&bundle, &golden_dir()).expect("diff runs");
    for table in &diff.tables {
        println!(
            "{}: {} cells, {} failures, max deviation {:.5}%",
            table.table,
            table.cells,
            table.failures,
            table.max_deviation * 100.0
        );
    }
    for cell in diff.cells.iter().filter(|c| !c.pass) {
        println!(
            "FAIL {} [{} / {}]: ours {} vs golden {} (dev {:?})",
            cell.table, cell.row, cell.column, cell.ours, cell.golden, cell.deviation
        );
    }
    assert!(diff.pass, "golden diff failed");
}

#[test]
fn every_golden_fixture_has_a_bundle_table() {
    let model = Model::load_default().unwrap();
    let bundle = report::run(&model).unwrap();
    let mut fixture_ids: Vec<String> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| {
            e.unwrap()
                .path()
                .file_stem()
                .unwrap()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    fixture_ids.sort();
    for id in fixture_ids {
        assert!(bundle.get(&id).is_ok(), "no table for fixture {id}");
    }
}

#[test]
fn identical_bundles_diff_to_zero() {
    let model = Model::load_default().unwrap();
    let a = report::run(&model).unwrap();
    let b = report::run(&model).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}

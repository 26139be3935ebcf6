use combwalk::exact::{comb_kernel_dp, KernelTable};
use combwalk::harness::{render_csv, CSV_HEADER};
use combwalk::lab::ExperimentReport;
use combwalk::lattice::CombVertex;

const KERNEL_N8: &str = include_str!("data/kernel_origin_n8.txt");

#[test]
fn kernel_n8_matches_frozen_table() {
    let table = comb_kernel_dp(CombVertex::ORIGIN, 8).unwrap();
    assert_eq!(table.to_golden(), KERNEL_N8);
}

#[test]
fn kernel_n8_golden_parses_back() {
    let parsed = KernelTable::from_golden(CombVertex::ORIGIN, 8, KERNEL_N8).unwrap();
    assert!((parsed.total() - 1.0).abs() < 1e-15);
    // straight up the tooth: 1/4 for the first step, then 1/2 per step
    assert_eq!(parsed.prob(CombVertex::new(0, 8)), 2f64.powi(-2 - 7));
    assert_eq!(parsed.prob(CombVertex::new(8, 0)), 4f64.powi(-8));
}

#[test]
fn csv_schema_is_pinned() {
    let mut rep = ExperimentReport::new("golden", 3);
    rep.row(1024, 10, "value", 0.1).with_target(0.125, 0.05, true);
    rep.row(2048, 10, "count", 7.0).with_verdict(false);
    let csv = render_csv(&[rep], "00ff", 3);
    let expected = "# combwalk-csv v1 config_hash=00ff seed=3\n\
        experiment,checkpoint_n,replicate_count,statistic_name,value,target,tolerance,verdict\n\
        golden,1024,10,value,0.1,0.125,0.05,pass\n\
        golden,2048,10,count,7,,,fail\n";
    assert_eq!(csv, expected);
    assert_eq!(csv.lines().nth(1), Some(CSV_HEADER));
}

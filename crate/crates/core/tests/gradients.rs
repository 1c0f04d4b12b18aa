mod common;

use procqa::autodiff::OpKind;
use procqa::harness::{gradcheck, GradCheckOptions, Scope};

#[test]
fn every_component_matches_finite_differences() {
    let (verdict, report) = common::criteria::gradient_fidelity();
    assert!(verdict.passed, "{}\n{report}", verdict.detail);
    assert!(report.entries.iter().all(|e| e.checked > 0));
}

#[test]
fn a_corrupted_backward_rule_is_reported_by_op_name() {
    for kind in [OpKind::MatMul, OpKind::Sigmoid, OpKind::SoftmaxRow, OpKind::SetRow] {
        let opts = GradCheckOptions {
            fault: Some(kind),
            ..GradCheckOptions::default()
        };
        let report = gradcheck(Scope::Ops, &opts);
        let name = format!("op/{}", kind.name());
        let entry = report.entry(&name).unwrap_or_else(|| panic!("{name} missing"));
        assert!(!entry.passed, "{name} passed with a faulty backward rule");
        assert!(entry.max_rel_error > 0.1);
        assert!(report.to_string().contains(&name));
    }
}

#[test]
fn a_fault_propagates_to_the_blocks_that_use_the_op() {
    let opts = GradCheckOptions {
        fault: Some(OpKind::Tanh),
        ..GradCheckOptions::default()
    };
    let report = gradcheck(Scope::Blocks, &opts);
    assert!(!report.entry("block/lstm_step").unwrap().passed);
    assert!(report.entry("block/mlp").unwrap().passed);
}

#[test]
fn op_names_parse_back() {
    for kind in OpKind::ALL {
        assert_eq!(kind.name().parse::<OpKind>().unwrap(), kind);
    }
    assert!("conv2d".parse::<OpKind>().is_err());
}

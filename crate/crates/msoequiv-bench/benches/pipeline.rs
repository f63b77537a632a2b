use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use msoequiv::compiler::{compile_word, DEFAULT_STATE_CAP};
use msoequiv::corpus;
use msoequiv::decider::{decide, Budget, DomainSpec};
use msoequiv::formulas::parse_formula;
use msoequiv::parikh::{cfg_parikh, ContextFreeGrammar};
use msoequiv::signature::Signature;

fn bench_compile(c: &mut Criterion) {
    let sig = Signature::string(&["a", "b"]);
    let f = parse_formula(
        "(forall x (forall y (implies (edg_a x y) (exists z (and (edg_b y z) (reach x z))))))",
        &sig,
        &vec![],
    )
    .unwrap();
    c.bench_function("compile_word quantified formula", |b| {
        b.iter(|| compile_word(black_box(&f), &vec![], &sig, DEFAULT_STATE_CAP).unwrap())
    });
}

fn bench_parikh(c: &mut Criterion) {
    let dyck = ContextFreeGrammar::parse("start: S\nS -> a S b S | ε\n").unwrap();
    c.bench_function("cfg_parikh dyck-1", |b| {
        b.iter(|| cfg_parikh(black_box(&dyck)).unwrap())
    });
}

fn bench_decide(c: &mut Criterion) {
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let alphabet = vec!["a".to_string(), "b".to_string()];
    let d = DomainSpec::regex("(a|b)*", &alphabet).unwrap();
    c.bench_function("decide identity vs reverse", |b| {
        b.iter(|| decide(black_box(&id), black_box(&rev), &d, &Budget::new()).unwrap())
    });
    let pal = DomainSpec::Cfg(corpus::palindrome_cfg());
    c.bench_function("decide identity vs reverse on palindromes", |b| {
        b.iter(|| decide(black_box(&id), black_box(&rev), &pal, &Budget::new()).unwrap())
    });
}

criterion_group!(benches, bench_compile, bench_parikh, bench_decide);
criterion_main!(benches);

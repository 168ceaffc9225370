use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ruzsa_core::bounds::{maximal_pair, ScanFilter};
use ruzsa_core::search::{find_basis, SearchOpts, SearchTask};
use ruzsa_core::zm::{rep_function, ResidueSet};

fn bench_rep_function(c: &mut Criterion) {
    let set = ResidueSet::from_members(
        499,
        &(0..499)
            .filter(|a| a % 7 == 0 || a % 11 == 3)
            .collect::<Vec<_>>(),
    )
    .unwrap();
    c.bench_function("rep_function m=499", |b| {
        b.iter(|| rep_function(black_box(&set)))
    });
}

fn bench_scans(c: &mut Criterion) {
    c.bench_function("eq5 scan 21..500", |b| {
        b.iter(|| maximal_pair(ScanFilter::Eq5, 21, 500))
    });
    c.bench_function("step1 scan 21..100", |b| {
        b.iter(|| maximal_pair(ScanFilter::Step1, 21, 100))
    });
}

fn bench_search(c: &mut Criterion) {
    c.bench_function("search m=19 r=4", |b| {
        b.iter(|| {
            let task = SearchTask::new(19, 4).unwrap();
            find_basis(black_box(&task), &SearchOpts::default()).unwrap()
        })
    });
    c.bench_function("exhaust m=12 r=3", |b| {
        b.iter(|| {
            let task = SearchTask::new(12, 3).unwrap();
            find_basis(black_box(&task), &SearchOpts::default()).unwrap()
        })
    });
}

criterion_group!(benches, bench_rep_function, bench_scans, bench_search);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use revnet::oracle::{check_correspondence, check_lemma_suite, explore, Bounds, Suite, SuiteConfig};
use revnet::{catalog, encode, reverse_coloured, reverse_occurrence, unfold, Directed, ReversibleNet, TransId};

fn unfolding(c: &mut Criterion) {
    let (n4, m4) = catalog::n4();
    c.bench_function("unfold N4 depth 3", |b| b.iter(|| unfold(black_box(&n4), &m4, 3).unwrap()));
    let (n3, m3) = catalog::n3();
    c.bench_function("unfold N3 depth 8", |b| b.iter(|| unfold(black_box(&n3), &m3, 8).unwrap()));
}

fn coloured(c: &mut Criterion) {
    let (n3, m3) = catalog::n3();
    let (cn, cm) = encode(&n3, &m3).unwrap();
    let rc = reverse_coloured(&cn).unwrap();
    let t1 = Directed::forward(TransId::from("t1"));
    c.bench_function("coloured N3 ten t1 firings", |b| {
        b.iter(|| {
            let mut m = cm.clone();
            for _ in 0..10 {
                let mt = rc.matches(&m, &t1).remove(0);
                m = rc.fire(&m, &t1, &mt.substitution).unwrap();
            }
            m
        })
    });
}

fn oracle(c: &mut Criterion) {
    let (n1, m1) = catalog::n1();
    let r = reverse_occurrence(&unfold(&n1, &m1, 3).unwrap().occurrence);
    c.bench_function("explore rev U[N1]", |b| {
        b.iter(|| explore(black_box(r.net()), r.initial_marking(), Bounds::default()))
    });
    let (o1, mo) = catalog::o1();
    let ro = ReversibleNet::from_net(o1, mo).unwrap();
    c.bench_function("lemma suites rev O1", |b| {
        b.iter(|| check_lemma_suite(black_box(&ro), &Suite::LEMMAS, &SuiteConfig::default()))
    });
    let (n2, m2) = catalog::n2();
    c.bench_function("correspondence N2 depth 3 steps 6", |b| {
        b.iter(|| check_correspondence(black_box(&n2), &m2, 3, 6, false).unwrap())
    });
}

criterion_group!(benches, unfolding, coloured, oracle);
criterion_main!(benches);

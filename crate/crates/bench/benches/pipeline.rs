use std::hint::black_box;
use std::path::Path;

use advaug::augment::{AugmentationConfig, Augmenter, Strategy, SynonymLexicon};
use advaug::corpus::{load_conllu, load_dataset};
use advaug::tagger::train;
use advaug::{tokenize, Format, Schema, Tagset};
use criterion::{criterion_group, criterion_main, Criterion, Throughput};

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn benches(c: &mut Criterion) {
    let tagset = Tagset::universal();
    let corpus = load_conllu(&data("en-train.conllu"), &tagset)
        .unwrap()
        .head(2000);
    let model = train(&corpus, 5, 0).unwrap();
    let lex = SynonymLexicon::load(&data("synonyms.tsv")).unwrap();
    let ds = load_dataset(
        &data("rt-polarity-train.jsonl"),
        Format::Jsonl,
        Schema::Single,
        2,
    )
    .unwrap();
    let sentence = "Perhaps the best sports movie i've ever seen, and it is very, very good.";

    c.bench_function("tokenize", |b| b.iter(|| tokenize(black_box(sentence))));

    let tokens = tokenize(sentence);
    c.bench_function("tag", |b| b.iter(|| model.tag(black_box(&tokens))));

    let mut group = c.benchmark_group("augment_dataset");
    group.throughput(Throughput::Elements(ds.len() as u64));
    group.sample_size(10);
    for strategy in [Strategy::AdverbDelete, Strategy::Eda, Strategy::Aeda] {
        let cfg = AugmentationConfig::new(strategy);
        let augmenter = Augmenter::new(&cfg, Some(&model), Some(&lex)).unwrap();
        group.bench_function(strategy.name(), |b| {
            b.iter(|| augmenter.augment_dataset(black_box(&ds)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(pipeline, benches);
criterion_main!(pipeline);

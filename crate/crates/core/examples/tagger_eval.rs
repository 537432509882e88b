use std::path::Path;
use std::time::Instant;

use advaug::corpus::load_conllu;
use advaug::tagger;
use advaug::Tagset;

fn main() -> advaug::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let tags = Tagset::universal();
    let train = load_conllu(&root.join("en-train.conllu"), &tags)?;
    let dev = load_conllu(&root.join("en-dev.conllu"), &tags)?;
    let start = Instant::now();
    let model = tagger::train(&train, 5, 0)?;
    println!(
        "trained in {:?}, {} features, {} lookup words",
        start.elapsed(),
        model.feature_count(),
        model.lookup_len()
    );
    println!("dev accuracy {:.4}", model.evaluate(&dev)?);
    for s in [
        "The film is strictly routine.",
        "The santa clause 2 proves itself a more streamlined and thought out encounter than the original could ever have hoped to be.",
        "This is a very ambitious project for a fairly inexperienced filmmaker, but good actors, good poetry and good music help sustain it.",
        "Perhaps the best sports movie i've ever seen.",
    ] {
        let t = model.tag(&advaug::tokenize(s));
        let line: Vec<String> = t.tokens.iter().zip(&t.tags).map(|(w, t)| format!("{w}/{t}")).collect();
        println!("{}", line.join(" "));
    }
    Ok(())
}

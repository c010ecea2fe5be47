//! Generates a few normal and anomalous sequences for both families and
//! writes one corpus with its manifest.
//!
//! cargo run --example generate_corpora

use zero_boundary::datagen::{gen_corpus, read_corpus, write_corpus, DatasetLabel, Family, Kind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for family in Family::ALL {
        println!("== {family}");
        let normal = gen_corpus(family, Kind::Normal, 3, 1)?;
        for x in normal.sequences() {
            println!("  normal   {}", String::from_utf8_lossy(&x));
        }
        for &kind in family.anomaly_kinds() {
            let corpus = gen_corpus(family, kind, 2, 1)?;
            for x in corpus.sequences() {
                println!("  {:<8} {}", kind.name(), String::from_utf8_lossy(&x));
            }
        }
    }

    let dir = std::env::temp_dir().join("zbseq-example-corpus");
    let path = dir.join("digit.txt");
    let label = DatasetLabel::new(Family::Ipv4, Kind::Digit)?;
    let corpus = gen_corpus(Family::Ipv4, Kind::Digit, 100, 9)?;
    write_corpus(&path, label, &corpus)?;
    let back = read_corpus(&path)?;
    assert_eq!(back.sequences(), corpus.sequences());
    println!("\nwrote {} sequences to {}", back.len(), path.display());
    print!("{}", std::fs::read_to_string(dir.join("digit.manifest"))?);
    Ok(())
}

//! Finds words in the generators that tell two pure states apart.
use polybergman::algebras::{equivalent_on, random_distinct_pair, separate, Alphabet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polybergman::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 3;
    for alphabet in [Alphabet::ProjectionSystem, Alphabet::ToeplitzSystem] {
        for _ in 0..3 {
            let (s1, s2) = random_distinct_pair(&mut rng, alphabet, n);
            assert!(!equivalent_on(alphabet, &s1, &s2));
            let sep = separate(&s1, &s2, alphabet, n, 2.0, 4)?;
            println!("{alphabet:?}: word {} separates with gap {:.3e}", sep.word, sep.gap);
        }
    }
    Ok(())
}

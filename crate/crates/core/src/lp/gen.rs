use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_program, Program};

const VARS: [&str; 3] = ["X", "Y", "Z"];

/// A random two-strata program over at most `max_consts` constants and
/// `max_preds` predicates. Predicates are assigned a stratum up front:
/// stratum-1 bodies are positive over stratum-1 predicates, stratum-2 bodies
/// may also negate stratum-1 predicates.
pub fn random_program(seed: u64, max_consts: usize, max_preds: usize) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nc = rng.gen_range(1..=max_consts.max(1));
    let consts: Vec<String> = (0..nc).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let np = rng.gen_range(1..=max_preds.max(1));
    let preds: Vec<(String, usize, bool)> = (0..np)
        .map(|i| (format!("p{i}"), rng.gen_range(usize::from(i == 0)..=2), i > 0 && rng.gen_bool(0.4)))
        .collect();
    let lower: Vec<&(String, usize, bool)> = preds.iter().filter(|p| !p.2).collect();

    let mut src = String::new();
    // The first fact is over `p0`, which has arguments, so the constant
    // domain is never empty.
    for k in 0..rng.gen_range(1..=4) {
        let (name, ar, _) = if k == 0 { &preds[0] } else { *lower.choose(&mut rng).unwrap() };
        let args: Vec<&str> = (0..*ar).map(|_| consts.choose(&mut rng).unwrap().as_str()).collect();
        src.push_str(&atom(name, &args));
        src.push_str(".\n");
    }
    for _ in 0..rng.gen_range(1..=5) {
        let (hname, har, upper) = preds.choose(&mut rng).unwrap();
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let (bname, bar, bupper) = if *upper {
                preds.choose(&mut rng).unwrap()
            } else {
                lower.choose(&mut rng).unwrap()
            };
            let negated = *upper && !bupper && rng.gen_bool(0.4);
            let args: Vec<&str> = (0..*bar).map(|_| term(&mut rng, &consts)).collect();
            if !negated {
                bound.extend(args.iter().filter(|a| VARS.contains(a)));
            }
            body.push(format!("{}{}", if negated { "!" } else { "" }, atom(bname, &args)));
        }
        // Negated literals may not be the only place a head variable occurs
        // in a safe rule, so draw head arguments from positive bindings.
        let hargs: Vec<&str> = (0..*har)
            .map(|_| {
                if !bound.is_empty() && rng.gen_bool(0.8) {
                    *bound.choose(&mut rng).unwrap()
                } else {
                    consts.choose(&mut rng).unwrap().as_str()
                }
            })
            .collect();
        src.push_str(&format!("{} :- {}.\n", atom(hname, &hargs), body.join(", ")));
    }
    parse_program(&src).expect("generated programs are well formed")
}

fn term<'a>(rng: &mut ChaCha8Rng, consts: &'a [String]) -> &'a str {
    if rng.gen_bool(0.6) {
        VARS.choose(rng).unwrap()
    } else {
        consts.choose(rng).unwrap()
    }
}

fn atom(name: &str, args: &[&str]) -> String {
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", args.join(","))
    }
}

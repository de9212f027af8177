//! Randomized property suites over synthetic models, one seed per trial.

use super::lemma::{check_form_i, check_form_ii, extend, TwoGen};
use super::model::{modulus_of, SyntheticLocalModel, Universe};
use super::system::*;
use crate::error::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Primes for universes that need group ring quotients.
    pub pool: Vec<u64>,
    pub max_primes: usize,
    /// Primes for the cancellation lemma, which needs no quotients.
    pub lemma_pool: Vec<u64>,
    pub lemma_max_primes: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 100,
            seed: 0,
            pool: vec![3, 5, 7, 11],
            max_primes: 3,
            lemma_pool: vec![3, 5, 7, 11, 13],
            lemma_max_primes: 4,
        }
    }
}

/// Counts of instances tried and passed for each property.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Tally {
    pub instances: usize,
    pub passed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.instances += 1;
        self.passed += ok as usize;
    }

    fn merge(&mut self, o: &Tally) {
        self.instances += o.instances;
        self.passed += o.passed;
    }

    pub fn ok(&self) -> bool {
        self.instances == self.passed
    }
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialSummary {
    pub trials: usize,
    pub seed: u64,
    /// Inverse recursion of a Kolyvagin system satisfies (i)–(v).
    pub inverse_is_preks: Tally,
    /// `𝒯` of such a pre-Kolyvagin system lands, satisfies (i)–(iii) and recovers the input.
    pub transform: Tally,
    pub injective: Tally,
    pub linear: Tally,
    /// (iv) and (iv)' give the same verdict at every split prime.
    pub iv_equivalence: Tally,
    /// A perturbation at an inert prime fails exactly there.
    pub canary: Tally,
    /// Extensions by form (ii) satisfy form (i), and the forms agree on perturbations.
    pub lemma: Tally,
    pub failed_seeds: Vec<u64>,
}

impl TrialSummary {
    pub fn passed(&self) -> bool {
        [&self.inverse_is_preks, &self.transform, &self.injective, &self.linear, &self.iv_equivalence, &self.canary, &self.lemma]
            .iter()
            .all(|t| t.ok())
    }

    fn merge(&mut self, o: &TrialSummary) {
        self.inverse_is_preks.merge(&o.inverse_is_preks);
        self.transform.merge(&o.transform);
        self.injective.merge(&o.injective);
        self.linear.merge(&o.linear);
        self.iv_equivalence.merge(&o.iv_equivalence);
        self.canary.merge(&o.canary);
        self.lemma.merge(&o.lemma);
        self.failed_seeds.extend(&o.failed_seeds);
    }
}

fn universe_with_split<R: Rng>(rng: &mut R, pool: &[u64], max: usize) -> Universe {
    loop {
        let u = Universe::random(rng, pool, max);
        if !u.split().is_empty() {
            return u;
        }
    }
}

fn random_preks<R: Rng>(levels: &Levels, rank: usize, rng: &mut R) -> PreKs {
    levels
        .levels()
        .map(|n| {
            let q = levels.quot(n);
            let vals = (0..rank)
                .map(|_| {
                    let coords = q.zero().moduli().iter().map(|&d| rng.gen_range(0..d.max(7) as i64)).collect();
                    q.class_from_coords(coords).expect("matching length")
                })
                .collect();
            (n, vals)
        })
        .collect()
}

fn is_zero(model: &SyntheticLocalModel, x: &PreKs) -> bool {
    x.values().flatten().all(|c| vanishes_mod(c, model.modulus))
}

fn one_trial(cfg: &TrialConfig, seed: u64) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = TrialSummary { trials: 1, seed, ..Default::default() };
    let u = universe_with_split(&mut rng, &cfg.pool, cfg.max_primes);
    let levels = Levels::new(&u)?;
    let (model, ks) = SyntheticLocalModel::random(&u, 1, &mut rng);

    let pre = inverse_transform(&levels, &ks)?;
    let rep = check_preks(&model, &levels, &pre)?;
    s.inverse_is_preks.record(rep.passed());
    let back = transform(&model, &levels, &pre);
    s.transform.record(matches!(&back, Ok(b) if ks_eq(&model, b, &ks) && check_ks(&model, b).passed()));

    let junk = random_preks(&levels, model.rank, &mut rng);
    let raw = transform_raw(&levels, &junk)?;
    let recovered = untransform_raw(&levels, &raw)?;
    s.injective.record(preks_eq(&model, &recovered, &junk) && (is_zero(&model, &raw) == is_zero(&model, &junk)));

    let a = rng.gen_range(-5..=5);
    let (_, ks2) = SyntheticLocalModel::random(&u, 1, &mut rng);
    let pre2 = inverse_transform(&levels, &ks2)?;
    let lhs = transform_raw(&levels, &scale_add_preks(a, &pre, &pre2))?;
    let rhs = scale_add_preks(a, &transform_raw(&levels, &pre)?, &transform_raw(&levels, &pre2)?);
    s.linear.record(preks_eq(&model, &lhs, &rhs));

    // perturb one value at a level divisible by a split prime
    let mut bent = pre.clone();
    let targets: Vec<u64> = u.levels().into_iter().filter(|&n| u.n_plus(n) > 1).collect();
    let n0 = targets[rng.gen_range(0..targets.len())];
    let k0 = rng.gen_range(0..model.rank);
    let y = levels.quot(n0).new_class();
    bent.get_mut(&n0).unwrap()[k0] = bent[&n0][k0].add(&y.scale(rng.gen_range(1..6)));
    let rep = check_preks(&model, &levels, &bent)?;
    let agree = u.split().iter().all(|&l| rep.holds_at("iv", l) == rep.holds_at("iv'", l));
    s.iv_equivalence.record(agree);

    if let (Some(&l), true) = (u.inert().first(), u.inert().len() == 1) {
        let mut m = model.clone();
        let extra = m.rank - 1;
        for v in m.fin.values_mut().chain(m.tr.values_mut()) {
            v[extra] = 0;
        }
        let top = u.product();
        let mut bad = ks.clone();
        bad.get_mut(&top).unwrap()[extra] += 1;
        let fails: Vec<(u64, u64)> = check_ks(&m, &bad).failures().iter().map(|c| (c.n, c.l)).collect();
        let visible = modulus_of(m.modulus, u.g(top)) > 1;
        s.canary.record(!visible || fails == vec![(top, l)]);
    }

    let lu = universe_with_split(&mut rng, &cfg.lemma_pool, cfg.lemma_max_primes);
    let l = lu.split()[rng.gen_range(0..lu.split().len())];
    let grp = TwoGen::random(&mut rng);
    let seed_vals = grp.random_collection(&lu, &mut rng);
    let x = extend(&grp, &lu, l, &seed_vals)?;
    let all = |v: Vec<(u64, bool)>| v.iter().all(|c| c.1);
    let mut ok = all(check_form_i(&grp, &lu, l, &x)?) && all(check_form_ii(&grp, &lu, l, &x)?);
    let mut y = x.clone();
    let divisible: Vec<u64> = lu.levels().into_iter().filter(|n| n % l == 0).collect();
    let n1 = divisible[rng.gen_range(0..divisible.len())];
    y.get_mut(&n1).unwrap()[0] += 1;
    let y0 = grp.reduce(&lu, n1, y[&n1].map(|c| c as i128));
    y.insert(n1, y0);
    ok &= all(check_form_i(&grp, &lu, l, &y)?) == all(check_form_ii(&grp, &lu, l, &y)?);
    s.lemma.record(ok);

    if !s.passed() {
        s.failed_seeds.push(seed);
    }
    Ok(s)
}

/// Run `cfg.trials` independent trials, trial `i` seeded by `cfg.seed + i`.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialSummary> {
    let results: Vec<Result<TrialSummary>> =
        (0..cfg.trials as u64).into_par_iter().map(|i| one_trial(cfg, cfg.seed.wrapping_add(i))).collect();
    let mut total = TrialSummary { seed: cfg.seed, ..Default::default() };
    for r in results {
        total.merge(&r?);
        total.trials += 1;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let s = run_trials(&TrialConfig { trials: 12, seed: 3, ..Default::default() }).unwrap();
        assert!(s.passed(), "{s:?}");
        assert_eq!(s.transform.instances, 12);
    }
}

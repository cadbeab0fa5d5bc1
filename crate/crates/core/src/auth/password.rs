use argon2::password_hash::rand_core::OsRng;
use argon2::password_hash::{PasswordHash, PasswordHasher as _, PasswordVerifier as _, SaltString};
use argon2::{Algorithm, Argon2, Params, Version};
use serde::{Deserialize, Serialize};

/// Argon2id cost parameters for newly created digests.
///
/// Verification always uses the parameters embedded in the stored digest, so
/// raising the cost never invalidates existing passwords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashCost {
    pub memory_kib: u32,
    pub iterations: u32,
}

impl Default for HashCost {
    fn default() -> Self {
        HashCost {
            memory_kib: 19_456,
            iterations: 2,
        }
    }
}

impl HashCost {
    /// Minimal cost, for tests and fixtures only.
    pub const fn fast() -> Self {
        HashCost {
            memory_kib: 64,
            iterations: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PasswordHasher {
    cost: HashCost,
    decoy: String,
}

impl PasswordHasher {
    pub fn new(cost: HashCost) -> Self {
        let mut hasher = PasswordHasher {
            cost,
            decoy: String::new(),
        };
        hasher.decoy = hasher.digest("decoy password for unknown principals");
        hasher
    }

    fn argon(&self) -> Argon2<'static> {
        let params = Params::new(self.cost.memory_kib.max(8), self.cost.iterations.max(1), 1, None).unwrap_or_default();
        Argon2::new(Algorithm::Argon2id, Version::V0x13, params)
    }

    /// Salted one-way digest in PHC string form.
    pub fn digest(&self, password: &str) -> String {
        let salt = SaltString::generate(&mut OsRng);
        self.argon()
            .hash_password(password.as_bytes(), &salt)
            .expect("argon2 parameters are valid")
            .to_string()
    }

    pub fn verify(&self, password: &str, digest: &str) -> bool {
        match PasswordHash::new(digest) {
            Ok(parsed) => Argon2::default().verify_password(password.as_bytes(), &parsed).is_ok(),
            Err(_) => false,
        }
    }

    /// Burns the same work as a real verification, for principals that do not exist.
    pub fn verify_decoy(&self, password: &str) {
        let _ = self.verify(password, &self.decoy);
    }
}

//! Embedding of a 4-free finitely generated abelian group into an ambient
//! group `D ⊕ T ⊕ F`: odd primary factors go to Prüfer coordinates, `Z/2`
//! factors to order-2 bits and free factors to free coordinates.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{AmbientElement, AmbientSignature, FreeMode, PruferCoord};
use crate::presentation::{has_order_four, CanonicalDecomposition, PrimePower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("group contains an element of order 4 (factor {0})")]
    HasOrderFour(PrimePower),
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
}

#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    signature: Arc<AmbientSignature>,
    decomposition: CanonicalDecomposition,
    generator_images: Vec<AmbientElement>,
}

impl EmbeddingMap {
    /// Builds the ambient signature factor by factor: one Prüfer factor per
    /// odd primary factor (in `(prime, exponent)` order), one bit per `Z/2`
    /// and one free coordinate per free generator.
    pub fn build(d: &CanonicalDecomposition, free_mode: FreeMode) -> Result<Self, EmbeddingError> {
        if has_order_four(d) {
            let f = d
                .primary_factors()
                .iter()
                .find(|f| f.prime == 2 && f.exponent >= 2)
                .copied()
                .expect("has_order_four found a factor");
            return Err(EmbeddingError::HasOrderFour(f));
        }
        let odd: Vec<&PrimePower> = d
            .primary_factors()
            .iter()
            .filter(|f| f.prime != 2)
            .collect();
        let twos = d.primary_factors().len() - odd.len();
        let signature = AmbientSignature::new(
            odd.iter().map(|f| f.prime).collect(),
            twos,
            d.free_rank(),
            free_mode,
        )
        .expect("primary factors carry odd primes");

        let mut images = Vec::with_capacity(d.generator_count());
        let mut prufer_index = 0;
        let mut bit_index = 0;
        for f in d.primary_factors() {
            if f.prime == 2 {
                let mut t = vec![false; twos];
                t[bit_index] = true;
                bit_index += 1;
                images.push(
                    AmbientElement::new(
                        &signature,
                        BTreeMap::new(),
                        t,
                        vec![BigRational::zero(); d.free_rank()],
                    )
                    .expect("valid image"),
                );
            } else {
                let coord = PruferCoord::new(1, BigInt::from(f.order()), f.prime)
                    .expect("p-power denominator");
                let dmap = BTreeMap::from([(prufer_index, coord)]);
                prufer_index += 1;
                images.push(
                    AmbientElement::new(
                        &signature,
                        dmap,
                        vec![false; twos],
                        vec![BigRational::zero(); d.free_rank()],
                    )
                    .expect("valid image"),
                );
            }
        }
        for i in 0..d.free_rank() {
            let mut q = vec![BigRational::zero(); d.free_rank()];
            q[i] = BigRational::one();
            images.push(
                AmbientElement::new(&signature, BTreeMap::new(), vec![false; twos], q)
                    .expect("valid image"),
            );
        }

        Ok(EmbeddingMap {
            signature,
            decomposition: d.clone(),
            generator_images: images,
        })
    }

    pub fn signature(&self) -> &Arc<AmbientSignature> {
        &self.signature
    }

    pub fn decomposition(&self) -> &CanonicalDecomposition {
        &self.decomposition
    }

    pub fn generator_images(&self) -> &[AmbientElement] {
        &self.generator_images
    }

    /// Linear extension of the generator images.
    pub fn embed<T: Clone + Into<BigInt>>(
        &self,
        coeffs: &[T],
    ) -> Result<AmbientElement, EmbeddingError> {
        if coeffs.len() != self.generator_images.len() {
            return Err(EmbeddingError::Length {
                expected: self.generator_images.len(),
                got: coeffs.len(),
            });
        }
        let mut acc = self.signature.zero();
        for (c, g) in coeffs.iter().zip(&self.generator_images) {
            let c: BigInt = c.clone().into();
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&g.scalar_mul(c)).expect("shared signature");
        }
        Ok(acc)
    }

    pub fn describe(&self) -> EmbeddingDescription {
        EmbeddingDescription {
            signature: self.signature.to_string(),
            decomposition: self.decomposition.to_string(),
            generators: self
                .decomposition
                .primary_factors()
                .iter()
                .map(|f| format!("Z/{f}"))
                .chain((0..self.decomposition.free_rank()).map(|_| "Z".to_string()))
                .zip(&self.generator_images)
                .map(|(factor, image)| GeneratorImage {
                    factor,
                    image: image.to_string(),
                })
                .collect(),
        }
    }
}

/// JSON-friendly view of an embedding.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingDescription {
    pub signature: String,
    pub decomposition: String,
    pub generators: Vec<GeneratorImage>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorImage {
    pub factor: String,
    pub image: String,
}

pub mod abgroup;
pub mod eqlang;
pub mod intlinalg;
pub mod pcgroup;
pub mod scalars;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/linear_algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/presentations.md")]
    mod presentations {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/equations.md")]
    mod equations {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}

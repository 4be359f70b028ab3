//! The snippets of the guide in `book/`, compiled and run as doctests.

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/images.md")]
    mod images {}
    #[doc = include_str!("../../../book/src/subdivision.md")]
    mod subdivision {}
    #[doc = include_str!("../../../book/src/homotopy.md")]
    mod homotopy {}
    #[doc = include_str!("../../../book/src/cofibrations.md")]
    mod cofibrations {}
    #[doc = include_str!("../../../book/src/diamond.md")]
    mod diamond {}
    #[doc = include_str!("../../../book/src/category.md")]
    mod category {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

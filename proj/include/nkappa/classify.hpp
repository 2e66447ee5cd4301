#pragma once

#include "nkappa/nevfun.hpp"

namespace nk {

enum class TheoremForm { Form1, Form2 };
enum class WitnessKind { Interior, Boundary };

// Decision content of the representation criterion: kappa, which theorem
// form holds (sign of Phi(0-)), the (A)/(B)/(C) presentation label, and
// which witness construction certifies exactness.
struct Classification {
    std::size_t kappa = 0;
    TheoremForm theorem_form = TheoremForm::Form2;
    KappaCase case_label = KappaCase::A;
    ExtReal phi_zero_minus;
    WitnessKind certificate = WitnessKind::Interior;
};

Classification classify(const PhiRep& rep, const QuadConfig& cfg = {});

// KappaForm -> Phi data with Phi(z) = z phi(z); round-trip evaluation
// equality is the authoritative contract.
PhiRep to_theorem_form(const KappaForm& form, const QuadConfig& cfg = {});

// Phi data -> (A)/(B)/(C) presentation under the given classification.
KappaForm from_theorem_form(const PhiRep& rep, const Classification& cls,
                            const QuadConfig& cfg = {});

// Phi data underlying a phi-type handle (converts KappaForm handles;
// throws for psi and direct-Phi handles).
PhiRep theorem_rep_of(const FunctionHandle& fun, const QuadConfig& cfg = {});

// classification of any phi-type handle, including the catalog psi
Classification classify_handle(const FunctionHandle& fun, const QuadConfig& cfg = {});

} // namespace nk

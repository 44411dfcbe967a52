#include "jcm/state_spec.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <utility>

#include "jcm/errors.hpp"

namespace jcm {

namespace {

struct FamilyInfo {
    Family family;
    std::string_view name;
    FieldUsage usage;
};

const std::array<FamilyInfo, 12>& family_table() {
    static const std::array<FamilyInfo, 12> table{{
        {Family::Coherent, "coherent", {.beta_sq = true}},
        {Family::Thermal, "thermal", {.n_T = true}},
        {Family::Fock, "fock", {.fock_level = true}},
        {Family::MixedCoherentThermal, "mixed-coherent-thermal", {.beta_sq = true, .n_T = true}},
        {Family::SqueezedVacuum, "squeezed-vacuum", {.r = true}},
        {Family::SqueezedFock, "squeezed-fock", {.r = true, .fock_level = true}},
        {Family::SqueezedThermal, "squeezed-thermal", {.n_T = true, .r = true}},
        {Family::SqueezedCoherent, "squeezed-coherent", {.beta_sq = true, .r = true, .psi = true}},
        {Family::MixedSqueezedCoherentThermal,
         "mixed-squeezed-coherent-thermal",
         {.beta_sq = true, .n_T = true, .r = true}},
        {Family::DisplacedSqueezedThermal,
         "displaced-squeezed-thermal",
         {.beta_sq = true, .n_T = true, .r = true, .psi = true, .variant = true}},
        {Family::DisplacedNumber, "displaced-number", {.beta_sq = true, .fock_level = true}},
        {Family::SqueezedDisplacedNumber,
         "squeezed-displaced-number",
         {.beta_sq = true, .r = true, .psi = true, .fock_level = true}},
    }};
    return table;
}

const FamilyInfo& info(Family f) {
    for (const auto& i : family_table())
        if (i.family == f) return i;
    throw InvalidArgument("unknown family");
}

void check_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(name) + " must be finite and >= 0");
}

}  // namespace

const std::vector<Family>& all_families() {
    static const std::vector<Family> list = [] {
        std::vector<Family> v;
        for (const auto& i : family_table()) v.push_back(i.family);
        return v;
    }();
    return list;
}

std::string_view family_name(Family f) { return info(f).name; }

std::optional<Family> parse_family(std::string_view name) {
    for (const auto& i : family_table())
        if (i.name == name) return i.family;
    if (name == "vourdas") return Family::MixedSqueezedCoherentThermal;
    if (name == "dsts" || name == "sdts") return Family::DisplacedSqueezedThermal;
    if (name == "sdns") return Family::SqueezedDisplacedNumber;
    return std::nullopt;
}

std::string_view variant_name(Variant v) { return v == Variant::DSTS ? "dsts" : "sdts"; }

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "dsts") return Variant::DSTS;
    if (name == "sdts") return Variant::SDTS;
    return std::nullopt;
}

FieldUsage fields_used(Family f) { return info(f).usage; }

StateSpec::StateSpec(Family family, StateParams params) : family_(family), params_(params) {
    const FieldUsage use = fields_used(family);
    const StateParams defaults{};
    check_nonneg(params_.beta_sq, "beta_sq");
    check_nonneg(params_.n_T, "n_T");
    check_nonneg(params_.r, "r");
    if (!std::isfinite(params_.psi)) throw InvalidArgument("psi must be finite");
    if (params_.fock_level < 0) throw InvalidArgument("fock level must be >= 0");
    const auto reject = [&](bool used, bool differs, const char* field) {
        if (!used && differs)
            throw InvalidArgument(std::string(field) + " is not a parameter of family " +
                                  std::string(family_name(family)));
    };
    reject(use.beta_sq, params_.beta_sq != defaults.beta_sq, "beta_sq");
    reject(use.n_T, params_.n_T != defaults.n_T, "n_T");
    reject(use.r, params_.r != defaults.r, "r");
    reject(use.psi, params_.psi != defaults.psi, "psi");
    reject(use.fock_level, params_.fock_level != defaults.fock_level, "fock level");
    reject(use.variant, params_.variant != defaults.variant, "variant");
}

StateSpec StateSpec::coherent(double beta_sq) { return {Family::Coherent, {.beta_sq = beta_sq}}; }
StateSpec StateSpec::thermal(double n_T) { return {Family::Thermal, {.n_T = n_T}}; }
StateSpec StateSpec::fock(int level) { return {Family::Fock, {.fock_level = level}}; }
StateSpec StateSpec::mixed_coherent_thermal(double beta_sq, double n_T) {
    return {Family::MixedCoherentThermal, {.beta_sq = beta_sq, .n_T = n_T}};
}
StateSpec StateSpec::squeezed_vacuum(double r) { return {Family::SqueezedVacuum, {.r = r}}; }
StateSpec StateSpec::squeezed_fock(double r, int level) {
    return {Family::SqueezedFock, {.r = r, .fock_level = level}};
}
StateSpec StateSpec::squeezed_thermal(double r, double n_T) {
    return {Family::SqueezedThermal, {.n_T = n_T, .r = r}};
}
StateSpec StateSpec::squeezed_coherent(double beta_sq, double r, double psi) {
    return {Family::SqueezedCoherent, {.beta_sq = beta_sq, .r = r, .psi = psi}};
}
StateSpec StateSpec::mixed_squeezed_coherent_thermal(double beta_sq, double n_T, double r) {
    return {Family::MixedSqueezedCoherentThermal, {.beta_sq = beta_sq, .n_T = n_T, .r = r}};
}
StateSpec StateSpec::displaced_squeezed_thermal(double beta_sq, double n_T, double r, double psi,
                                                Variant variant) {
    return {Family::DisplacedSqueezedThermal,
            {.beta_sq = beta_sq, .n_T = n_T, .r = r, .psi = psi, .variant = variant}};
}
StateSpec StateSpec::displaced_number(double beta_sq, int level) {
    return {Family::DisplacedNumber, {.beta_sq = beta_sq, .fock_level = level}};
}
StateSpec StateSpec::squeezed_displaced_number(double beta_sq, double r, double psi, int level) {
    return {Family::SqueezedDisplacedNumber, {.beta_sq = beta_sq, .r = r, .psi = psi, .fock_level = level}};
}

std::string StateSpec::describe() const {
    const FieldUsage use = fields_used(family_);
    std::string out(family_name(family_));
    char buf[64];
    const auto add = [&](bool used, const char* key, double v) {
        if (!used) return;
        std::snprintf(buf, sizeof buf, " %s=%.6g", key, v);
        out += buf;
    };
    add(use.beta_sq, "beta2", params_.beta_sq);
    add(use.n_T, "nt", params_.n_T);
    add(use.r, "r", params_.r);
    add(use.psi, "psi", params_.psi);
    add(use.fock_level, "l", params_.fock_level);
    if (use.variant) out += std::string(" variant=") + std::string(variant_name(params_.variant));
    return out;
}

}  // namespace jcm

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcm {

enum class Family {
    Coherent,
    Thermal,
    Fock,
    MixedCoherentThermal,
    SqueezedVacuum,
    SqueezedFock,
    SqueezedThermal,
    SqueezedCoherent,
    MixedSqueezedCoherentThermal,
    DisplacedSqueezedThermal,
    DisplacedNumber,
    SqueezedDisplacedNumber,
};

// Operator order for the displaced squeezed thermal family.
enum class Variant { DSTS, SDTS };

inline constexpr double kPi = 3.14159265358979323846;

const std::vector<Family>& all_families();
std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);
std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct StateParams {
    double beta_sq = 0.0;
    double n_T = 0.0;
    double r = 0.0;
    double psi = kPi;
    int fock_level = 0;
    Variant variant = Variant::DSTS;
};

// Validated family selection.  Fields not used by the family must keep their
// defaults.
class StateSpec {
public:
    StateSpec(Family family, StateParams params);

    static StateSpec coherent(double beta_sq);
    static StateSpec thermal(double n_T);
    static StateSpec fock(int level);
    static StateSpec mixed_coherent_thermal(double beta_sq, double n_T);
    static StateSpec squeezed_vacuum(double r);
    static StateSpec squeezed_fock(double r, int level);
    static StateSpec squeezed_thermal(double r, double n_T);
    static StateSpec squeezed_coherent(double beta_sq, double r, double psi = kPi);
    static StateSpec mixed_squeezed_coherent_thermal(double beta_sq, double n_T, double r);
    static StateSpec displaced_squeezed_thermal(double beta_sq, double n_T, double r, double psi = kPi,
                                                Variant variant = Variant::DSTS);
    static StateSpec displaced_number(double beta_sq, int level);
    static StateSpec squeezed_displaced_number(double beta_sq, double r, double psi, int level);

    Family family() const { return family_; }
    const StateParams& params() const { return params_; }
    double beta_sq() const { return params_.beta_sq; }
    double n_T() const { return params_.n_T; }
    double r() const { return params_.r; }
    double psi() const { return params_.psi; }
    int fock_level() const { return params_.fock_level; }
    Variant variant() const { return params_.variant; }

    std::string describe() const;

private:
    Family family_;
    StateParams params_;
};

struct FieldUsage {
    bool beta_sq = false;
    bool n_T = false;
    bool r = false;
    bool psi = false;
    bool fock_level = false;
    bool variant = false;
};

FieldUsage fields_used(Family f);

}  // namespace jcm

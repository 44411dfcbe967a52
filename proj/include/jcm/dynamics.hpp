#pragma once

#include <optional>
#include <vector>

#include "jcm/states.hpp"

namespace jcm {

struct DynamicsConfig {
    double delta = 0.0;          // dimensionless detuning
    double z_max = 100.0;        // normalized time bound
    int samples_per_period = 20; // per fastest Rabi period
    double eps_tail = 1e-8;
    double prefactor = 1.0;      // (2 gamma / mu)^2
    // Mean photon number fixing the z scale; the pmf mean when absent.
    std::optional<double> reference_mean;
};

enum class Mode { Resonant, NonResonant };

struct TimeSeries {
    std::vector<double> z;
    std::vector<double> s1;
    Mode mode = Mode::Resonant;
    double time_average = 0.0;
    double envelope_max = 0.0;
    // Period in z of the slowest significant Rabi term (1% quantile level).
    double slow_period = 0.0;
};

struct EnvelopeMetrics {
    std::optional<double> collapse_time;
    std::vector<double> revival_centers;
    // Collapse counts as the first node; each later fall of the envelope
    // below a quarter of its preceding peak adds one.
    int node_count = 0;
    double initial_amplitude = 0.0;
};

void validate(const DynamicsConfig& cfg);

// Uniform grid on [0, z_max] with spacing at most
// pi sqrt((nbar+1)/(N+1+delta)) / samples_per_period.
std::vector<double> make_z_grid(const PhotonDistribution& pmf, const DynamicsConfig& cfg);

TimeSeries s1_resonant(const PhotonDistribution& pmf, const DynamicsConfig& cfg);
TimeSeries s1_nonresonant(const PhotonDistribution& pmf, const DynamicsConfig& cfg);
TimeSeries s1_on_grid(const PhotonDistribution& pmf, double delta, const std::vector<double>& z, double prefactor = 1.0,
                      std::optional<double> reference_mean = std::nullopt);

double time_average_closed(const PhotonDistribution& pmf, double delta);
double trapezoid_average(const std::vector<double>& z, const std::vector<double>& y);

// Period of the sin^2 term for the level at the given probability quantile.
double quantile_period(const PhotonDistribution& pmf, double delta, double quantile = 0.01,
                       std::optional<double> reference_mean = std::nullopt);

EnvelopeMetrics envelope_metrics(const TimeSeries& series);
// Sliding max - min over a centered window of 4 slow periods.
std::vector<double> windowed_amplitude(const TimeSeries& series);

}  // namespace jcm

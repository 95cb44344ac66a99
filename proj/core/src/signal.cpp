#include "slris/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slris {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double mean_power_of(std::span<const Sample> samples) {
    double acc = 0.0;
    for (const Sample& s : samples) acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

}  // namespace

const char* to_string(SignalClass cls) {
    switch (cls) {
        case SignalClass::Idle: return "Idle";
        case SignalClass::DOnly: return "DOnly";
        case SignalClass::IOnly: return "IOnly";
        case SignalClass::Both: return "Both";
    }
    return "?";
}

bool has_desired(SignalClass cls) {
    return cls == SignalClass::DOnly || cls == SignalClass::Both;
}

bool has_interferer(SignalClass cls) {
    return cls == SignalClass::IOnly || cls == SignalClass::Both;
}

bool valid_window_length(std::size_t len) {
    return std::find(kWindowLengths.begin(), kWindowLengths.end(), len) != kWindowLengths.end();
}

double IqWindow::mean_power() const {
    if (samples.empty()) return 0.0;
    return mean_power_of(samples);
}

UserSignature desired_signature() { return {Modulation::Qpsk, 0.01, 4}; }
UserSignature interferer_signature() { return {Modulation::Bpsk, -0.02, 4}; }

std::vector<Sample> gen_symbols(const UserSignature& signature, std::size_t n_symbols, Rng& rng) {
    if (signature.samples_per_symbol < 1)
        throw std::invalid_argument("gen_symbols: samples_per_symbol must be >= 1");
    if (std::abs(signature.cfo) >= 0.5)
        throw std::invalid_argument("gen_symbols: |cfo| must be < 0.5 cycles/sample");

    const std::size_t sps = static_cast<std::size_t>(signature.samples_per_symbol);
    std::vector<Sample> out;
    out.reserve(n_symbols * sps);

    for (std::size_t i = 0; i < n_symbols; ++i) {
        Sample symbol;
        if (signature.modulation == Modulation::Qpsk) {
            std::uint64_t bits = rng.uniform_index(4);
            double re = (bits & 1) ? kInvSqrt2 : -kInvSqrt2;
            double im = (bits & 2) ? kInvSqrt2 : -kInvSqrt2;
            symbol = {re, im};
        } else {
            symbol = {rng.uniform_index(2) ? 1.0 : -1.0, 0.0};
        }
        out.insert(out.end(), sps, symbol);
    }

    if (signature.cfo != 0.0) {
        const double step = 2.0 * std::numbers::pi * signature.cfo;
        for (std::size_t t = 0; t < out.size(); ++t)
            out[t] *= std::polar(1.0, step * static_cast<double>(t));
    }
    return out;
}

std::vector<Sample> awgn(std::span<const Sample> input, double snr_db, Rng& rng) {
    if (input.empty()) throw std::invalid_argument("awgn: empty input sequence");
    if (!std::isfinite(snr_db)) throw std::invalid_argument("awgn: snr_db must be finite");

    const double signal_power = mean_power_of(input);
    const double noise_variance = signal_power / std::pow(10.0, snr_db / 10.0);

    std::vector<Sample> out(input.begin(), input.end());
    for (Sample& s : out) s += rng.normal_complex(noise_variance);
    return out;
}

std::vector<Sample> mix(std::optional<std::span<const Sample>> desired,
                        std::optional<std::span<const Sample>> interferer,
                        double power_ratio_db) {
    if (!desired && !interferer)
        throw std::invalid_argument("mix: both operands absent");
    if (desired && interferer && desired->size() != interferer->size())
        throw std::invalid_argument("mix: operand lengths differ");

    const double scale = std::pow(10.0, power_ratio_db / 20.0);
    if (!interferer) return {desired->begin(), desired->end()};
    if (!desired) {
        std::vector<Sample> out(interferer->begin(), interferer->end());
        for (Sample& s : out) s *= scale;
        return out;
    }
    std::vector<Sample> out(desired->begin(), desired->end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * (*interferer)[i];
    return out;
}

void normalize_power(std::vector<Sample>& samples) {
    if (samples.empty()) throw std::invalid_argument("normalize_power: empty sequence");
    const double power = mean_power_of(samples);
    if (power <= 0.0) throw std::invalid_argument("normalize_power: zero-power sequence");
    const double scale = 1.0 / std::sqrt(power);
    for (Sample& s : samples) s *= scale;
}

IqWindow make_window(SignalClass cls, std::size_t window_len, double snr_db,
                     const UserSignature& sig_d, const UserSignature& sig_i, Rng& rng) {
    if (!valid_window_length(window_len))
        throw std::invalid_argument("make_window: unsupported window length");

    auto truncated = [window_len](const UserSignature& sig, Rng& r) {
        const std::size_t sps = static_cast<std::size_t>(sig.samples_per_symbol);
        const std::size_t n_symbols = (window_len + sps - 1) / sps;
        std::vector<Sample> s = gen_symbols(sig, n_symbols, r);
        s.resize(window_len);
        return s;
    };

    std::vector<Sample> content;
    switch (cls) {
        case SignalClass::Idle:
            content.resize(window_len);
            for (Sample& s : content) s = rng.normal_complex(1.0);
            break;
        case SignalClass::DOnly:
            content = awgn(truncated(sig_d, rng), snr_db, rng);
            break;
        case SignalClass::IOnly:
            content = awgn(truncated(sig_i, rng), snr_db, rng);
            break;
        case SignalClass::Both: {
            const double ratio_db = rng.uniform(-5.0, 5.0);
            std::vector<Sample> d = truncated(sig_d, rng);
            std::vector<Sample> i = truncated(sig_i, rng);
            content = awgn(mix(std::span<const Sample>(d), std::span<const Sample>(i), ratio_db),
                           snr_db, rng);
            break;
        }
    }

    normalize_power(content);
    return IqWindow{std::move(content), cls};
}

}  // namespace slris

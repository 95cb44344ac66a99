#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slris/rng.hpp"

namespace slris {

using Sample = std::complex<double>;

enum class Modulation { Qpsk, Bpsk };

/// Baseband signature of one transmitter: constellation, residual carrier
/// frequency offset (cycles/sample) and rectangular pulse length.
struct UserSignature {
    Modulation modulation = Modulation::Qpsk;
    double cfo = 0.0;
    int samples_per_symbol = 4;
};

/// Spectrum occupancy: which of the two users are transmitting.
enum class SignalClass : std::uint8_t { Idle = 0, DOnly = 1, IOnly = 2, Both = 3 };

inline constexpr std::array<SignalClass, 4> kAllSignalClasses{
    SignalClass::Idle, SignalClass::DOnly, SignalClass::IOnly, SignalClass::Both};

const char* to_string(SignalClass cls);

/// Does the class include the desired / interfering transmitter?
bool has_desired(SignalClass cls);
bool has_interferer(SignalClass cls);

inline constexpr std::array<std::size_t, 3> kWindowLengths{32, 128, 512};
bool valid_window_length(std::size_t len);

/// One classifier input unit: a fixed-length normalized I/Q capture,
/// optionally labeled with the occupancy it was generated under.
struct IqWindow {
    std::vector<Sample> samples;
    std::optional<SignalClass> label;

    std::size_t length() const { return samples.size(); }
    double mean_power() const;

    bool operator==(const IqWindow&) const = default;
};

/// Default signatures for the two users. The desired user transmits QPSK
/// with a small positive frequency offset, the interferer BPSK with a
/// negative one, so the four occupancy classes are structurally
/// distinguishable after per-window power normalization.
UserSignature desired_signature();
UserSignature interferer_signature();

/// Generate `n_symbols` random constellation symbols, rectangular-shaped at
/// `samples_per_symbol`, with the CFO applied as a per-sample phase rotation
/// exp(j*2*pi*cfo*t). Unit average symbol power by construction.
std::vector<Sample> gen_symbols(const UserSignature& signature, std::size_t n_symbols, Rng& rng);

/// Add circularly symmetric complex Gaussian noise. The noise variance is
/// P_sig / 10^(snr_db/10) where P_sig is the empirical mean power of `input`.
/// Throws std::invalid_argument on an empty input.
std::vector<Sample> awgn(std::span<const Sample> input, double snr_db, Rng& rng);

/// desired + 10^(power_ratio_db/20) * interferer; an absent operand is
/// treated as zero. Throws if lengths differ or both operands are absent.
std::vector<Sample> mix(std::optional<std::span<const Sample>> desired,
                        std::optional<std::span<const Sample>> interferer,
                        double power_ratio_db);

/// Scale to unit mean per-sample power. Throws on empty or all-zero input.
void normalize_power(std::vector<Sample>& samples);

/// Synthesize one labeled window of length `window_len` for the requested
/// occupancy class, add noise at `snr_db`, and normalize to unit mean power.
/// For Both, the interferer-to-desired power ratio is drawn uniformly from
/// [-5, +5] dB. Throws std::invalid_argument on an unsupported length.
IqWindow make_window(SignalClass cls, std::size_t window_len, double snr_db,
                     const UserSignature& sig_d, const UserSignature& sig_i, Rng& rng);

}  // namespace slris

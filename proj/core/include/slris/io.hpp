#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace slris {

/// Errors raised by the .risl / .rism binary readers. `kind` distinguishes
/// the failure classes callers may want to handle separately.
class FormatError : public std::runtime_error {
public:
    enum class Kind { BadMagic, BadVersion, Truncated, Corrupt };

    FormatError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

namespace io {

// All on-disk integers and floats are little-endian, assembled/split
// bytewise so the format is identical on any host.

void write_u16(std::ostream& os, std::uint16_t v);
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f32(std::ostream& os, float v);
void write_f64(std::ostream& os, double v);
void write_u8(std::ostream& os, std::uint8_t v);

// Readers throw FormatError{Truncated} on EOF.
std::uint16_t read_u16(std::istream& is);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
float read_f32(std::istream& is);
double read_f64(std::istream& is);
std::uint8_t read_u8(std::istream& is);

/// Reads a 4-byte magic and compares; throws FormatError{BadMagic} or
/// {Truncated}.
void expect_magic(std::istream& is, const char expected[4], const char* what);

std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace io
}  // namespace slris

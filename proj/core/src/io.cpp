#include "slris/io.hpp"

#include <bit>
#include <cstring>

namespace slris::io {

namespace {

template <typename T, std::size_t N = sizeof(T)>
void write_le(std::ostream& os, T value) {
    static_assert(std::is_integral_v<T>);
    char bytes[N];
    for (std::size_t i = 0; i < N; ++i)
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    os.write(bytes, N);
}

template <typename T, std::size_t N = sizeof(T)>
T read_le(std::istream& is) {
    static_assert(std::is_integral_v<T>);
    char bytes[N];
    is.read(bytes, N);
    if (is.gcount() != static_cast<std::streamsize>(N))
        throw FormatError(FormatError::Kind::Truncated, "unexpected end of file");
    T value = 0;
    for (std::size_t i = 0; i < N; ++i)
        value |= static_cast<T>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    return value;
}

}  // namespace

void write_u8(std::ostream& os, std::uint8_t v) { write_le<std::uint8_t>(os, v); }
void write_u16(std::ostream& os, std::uint16_t v) { write_le<std::uint16_t>(os, v); }
void write_u32(std::ostream& os, std::uint32_t v) { write_le<std::uint32_t>(os, v); }
void write_u64(std::ostream& os, std::uint64_t v) { write_le<std::uint64_t>(os, v); }

void write_f32(std::ostream& os, float v) {
    write_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(v));
}

void write_f64(std::ostream& os, double v) {
    write_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
}

std::uint8_t read_u8(std::istream& is) { return read_le<std::uint8_t>(is); }
std::uint16_t read_u16(std::istream& is) { return read_le<std::uint16_t>(is); }
std::uint32_t read_u32(std::istream& is) { return read_le<std::uint32_t>(is); }
std::uint64_t read_u64(std::istream& is) { return read_le<std::uint64_t>(is); }

float read_f32(std::istream& is) {
    return std::bit_cast<float>(read_le<std::uint32_t>(is));
}

double read_f64(std::istream& is) {
    return std::bit_cast<double>(read_le<std::uint64_t>(is));
}

void expect_magic(std::istream& is, const char expected[4], const char* what) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4)
        throw FormatError(FormatError::Kind::Truncated, std::string(what) + ": file too short");
    if (std::memcmp(magic, expected, 4) != 0)
        throw FormatError(FormatError::Kind::BadMagic, std::string(what) + ": bad magic");
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    return is;
}

}  // namespace slris::io

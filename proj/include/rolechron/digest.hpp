#ifndef ROLECHRON_DIGEST_HPP
#define ROLECHRON_DIGEST_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace rolechron {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

}  // namespace rolechron

#endif

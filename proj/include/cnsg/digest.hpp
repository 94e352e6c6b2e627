#pragma once

#include <string>
#include <string_view>

namespace cnsg {

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::string& path);

}  // namespace cnsg

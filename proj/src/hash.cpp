#include "currikit/hash.hpp"

#include <fstream>
#include <sstream>

#include "currikit/error.hpp"

namespace currikit {

std::string fingerprint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return to_hex(fnv1a64(buffer.str()));
}

}  // namespace currikit

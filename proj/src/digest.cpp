#include "persim/digest.hpp"

#include <array>
#include <memory>

#include <openssl/evp.h>

#include "persim/error.hpp"
#include "persim/jsonl.hpp"

namespace persim {

std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> buffer{};
    unsigned int length = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), buffer.data(), &length) != 1) {
        throw DataError("sha256 digest computation failed");
    }
    static const char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    out.reserve(out.size() + 2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[buffer[i] >> 4];
        out += hex[buffer[i] & 0x0F];
    }
    return out;
}

std::string file_digest(const std::filesystem::path &path) {
    return sha256_hex(read_text_file(path));
}

} // namespace persim

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include <kronred/report_json.hpp>

#include "common.hpp"

namespace kronred::cli {

namespace {

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("manifest: SHA-256 digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void write_manifest(const Common& c, const nlohmann::json& network_doc, const std::string& report_text)
{
    if (c.manifest_path.empty()) {
        return;
    }
    std::string cmd;
    for (const auto& a : c.argv) {
        cmd += (cmd.empty() ? "" : " ") + a;
    }
    nlohmann::json m = {
        {"command_line", cmd},
        {"input_digest", "sha256:" + sha256_hex(network_doc.dump())},
        {"report_digest", "sha256:" + sha256_hex(report_text)},
        {"tool_version", KRONRED_VERSION},
        {"tolerances", to_json(c.tol)},
        {"gramian_objective", c.objective},
        {"timestamp", utc_timestamp()},
    };
    std::ofstream out(c.manifest_path, std::ios::binary);
    if (!out) {
        throw InputError(c.manifest_path + ": cannot open manifest for writing");
    }
    out << dump_canonical(m);
}

}  // namespace kronred::cli

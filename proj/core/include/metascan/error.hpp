#pragma once

#include <stdexcept>
#include <string>

namespace metascan {

enum class Errc {
    // media parsing
    Truncated,
    NotJpeg,
    BadLength,
    MalformedIptc,
    FieldTooLong,
    OutOfRange,
    NotSyncsafe,
    UnsupportedVersion,
    BadFrameId,
    BadSize,
    NoMoov,
    // payload engine
    DuplicateId,
    MalformedRecord,
    BadPlanId,
    UnknownField,
    EmptyVectorSet,
    // scanning / fingerprinting
    IoError,
    BadBasePath,
    UnknownProbeId,
    // crawler
    InvalidUrl,
    TooManyRedirects,
    ExhaustedRetries,
    HostUnreachable,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace metascan

#include "metascan/error.hpp"

namespace metascan {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::Truncated: return "Truncated";
    case Errc::NotJpeg: return "NotJpeg";
    case Errc::BadLength: return "BadLength";
    case Errc::MalformedIptc: return "MalformedIptc";
    case Errc::FieldTooLong: return "FieldTooLong";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NotSyncsafe: return "NotSyncsafe";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::BadFrameId: return "BadFrameId";
    case Errc::BadSize: return "BadSize";
    case Errc::NoMoov: return "NoMoov";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::BadPlanId: return "BadPlanId";
    case Errc::UnknownField: return "UnknownField";
    case Errc::EmptyVectorSet: return "EmptyVectorSet";
    case Errc::IoError: return "IoError";
    case Errc::BadBasePath: return "BadBasePath";
    case Errc::UnknownProbeId: return "UnknownProbeId";
    case Errc::InvalidUrl: return "InvalidUrl";
    case Errc::TooManyRedirects: return "TooManyRedirects";
    case Errc::ExhaustedRetries: return "ExhaustedRetries";
    case Errc::HostUnreachable: return "HostUnreachable";
    }
    return "Unknown";
}

} // namespace metascan

#include "tropdiv/errors.hpp"

namespace tropdiv {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DisconnectedGraph: return "DisconnectedGraph";
        case Errc::NonpositiveLength: return "NonpositiveLength";
        case Errc::DanglingEndpoint: return "DanglingEndpoint";
        case Errc::InvalidPoint: return "InvalidPoint";
        case Errc::TreeInput: return "TreeInput";
        case Errc::NegativeOffSink: return "NegativeOffSink";
        case Errc::NotEffective: return "NotEffective";
        case Errc::AlreadyReduced: return "AlreadyReduced";
        case Errc::NotEquivalent: return "NotEquivalent";
        case Errc::NotTreeWithLoops: return "NotTreeWithLoops";
        case Errc::InvalidInvolution: return "InvalidInvolution";
        case Errc::RankMismatch: return "RankMismatch";
        case Errc::GenusTooSmall: return "GenusTooSmall";
        case Errc::SubdivisionTooLarge: return "SubdivisionTooLarge";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::RetriesExhausted: return "RetriesExhausted";
        case Errc::ParseError: return "ParseError";
        case Errc::DiscontinuousAtVertex: return "DiscontinuousAtVertex";
        case Errc::NonIntegerSlope: return "NonIntegerSlope";
    }
    return "UnknownError";
}

}  // namespace tropdiv

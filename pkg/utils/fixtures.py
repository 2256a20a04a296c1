"""
Autonomous ship case study, baseline and enhanced.

Only elements named in the published assessment are modelled. The full
component and link inventory of its schematic is not enumerated in the text,
so only that subset appears here. Navigation system and Intrusion detection
system are present in both designs to keep diffs stable.
"""
from services.model import (
    AllocationStatus,
    Attacker,
    Component,
    Control,
    DataFlow,
    DataItem,
    Directionality,
    ImpactLevel,
    LikelihoodLevel,
    Link,
    LinkType,
    Model,
    ScoringSystem,
    Threat,
    ThreatAllocation,
)

# ranks 2 and 4 are unnamed in the source scale
LIKELIHOOD_NAMES = (
    "Extremely remote",
    "Level 2",
    "Remote",
    "Level 4",
    "Reasonably probable",
    "Difficulty",
    "Frequent",
)
IMPACT_NAMES = ("Minor", "Significant", "Severe", "Catastrophic")

SHIP_SUBSYSTEMS = (
    ("connectivity-manager", "Connectivity Manager"),
    ("ship-control-station", "Ship control station"),
    ("autonomous-ship-controller", "Autonomous Ship Controller"),
    ("navigation-system", "Navigation system"),
    ("intrusion-detection-system", "Intrusion detection system"),
    ("vessel-communication-systems", "Systems for communicating with other vessels"),
    ("generators", "Generators"),
    ("fuel-system", "Fuel system"),
)

# shore control centre functional analysis: data sent, then data received
DATA_SENT = (
    ("control-information-for-navigation", "Control information for navigation"),
    ("selected-route", "Selected route"),
    ("ship-operating-mode", "Ship operating mode"),
    ("equipment-control-status", "Control status of equipment (on/off)"),
    ("new-software", "New software"),
)
DATA_RECEIVED = (
    ("equipment-health-status", "Equipment health status"),
    ("equipment-status", "Equipment status (on/off, loads, position)"),
    ("camera-images", "Images from cameras"),
    ("vessel-position", "Vessel position"),
    ("vhf-data", "VHF data"),
    ("area-traffic", "Traffic in the area"),
    ("radar-ecdis-information", "Radar, ECDIS information"),
)

MALWARE = "malware-installation"
KERNEL_CONTROL = "kernel-function"


def default_scoring() -> ScoringSystem:
    """7 likelihood (FI) by 4 impact (SI) levels, Low up to RI 4, High from RI 8."""
    return ScoringSystem(
        likelihood=tuple(LikelihoodLevel(rank=i, name=n) for i, n in enumerate(LIKELIHOOD_NAMES, start=1)),
        impact=tuple(ImpactLevel(rank=i, name=n) for i, n in enumerate(IMPACT_NAMES, start=1)),
    )


def _components() -> tuple[Component, ...]:
    return (
        Component(id="shore-control-centre", name="Shore control centre"),
        Component(id="communication-network", name="Communication network"),
        Component(id="internet", name="Internet", external=True),
        Component(id="other-vessels", name="Other vessels", external=True),
        Component(
            id="ship-systems",
            name="Ship systems",
            children=tuple(Component(id=i, name=n) for i, n in SHIP_SUBSYSTEMS),
        ),
    )


def _link_types() -> tuple[LinkType, ...]:
    return (
        LinkType(id="ethernet", name="Ethernet", color="blue"),
        LinkType(id="nmea", name="NMEA", color="purple"),
        LinkType(id="4g-5g", name="4G/5G", color="darkorange"),
        LinkType(id="ipv6", name="IPv6", color="teal"),
        LinkType(id="physical", name="physical", color="black"),
    )


def _links() -> tuple[Link, ...]:
    return (
        Link(id="link-shore-comm", type="4g-5g", a="shore-control-centre", b="communication-network"),
        Link(id="link-comm-connectivity", type="4g-5g", a="communication-network", b="connectivity-manager"),
        Link(id="link-internet-comm", type="ipv6", a="internet", b="communication-network"),
        Link(id="link-internet-shore", type="ipv6", a="internet", b="shore-control-centre"),
        Link(id="link-ship-vessels", type="physical", a="ship-systems", b="other-vessels"),
        Link(
            id="link-generators-fuel",
            type="physical",
            a="generators",
            b="fuel-system",
            directionality=Directionality.A_TO_B,
        ),
    )


def _data_flows() -> tuple[DataFlow, ...]:
    # the far end of each flow is not disclosed; Ship systems stands for it
    return (
        DataFlow(
            id="flow-shore-to-ship",
            source="shore-control-centre",
            destination="ship-systems",
            items=tuple(i for i, _ in DATA_SENT),
        ),
        DataFlow(
            id="flow-ship-to-shore",
            source="ship-systems",
            destination="shore-control-centre",
            items=tuple(i for i, _ in DATA_RECEIVED),
        ),
    )


def _threats() -> tuple[Threat, ...]:
    return (
        Threat(
            id="social-engineering-malware",
            name="Combination of social engineering with malware installation",
            attacker="terrorists",
        ),
        Threat(id="shore-access", name="Getting access to the shore control centre", attacker="terrorists"),
        Threat(id="physical-attack", name="Physical attack", attacker="terrorists"),
        Threat(id=MALWARE, name="Malware installation", attacker="terrorists"),
    )


def _allocation(allocation_id, threat, component, fi, si, reported_ri, **extra) -> ThreatAllocation:
    return ThreatAllocation(
        id=allocation_id, threat=threat, component=component, fi=fi, si=si, reported_ri=reported_ri, **extra
    )


def _model(name, controls, allocations) -> Model:
    return Model(
        name=name,
        scoring=default_scoring(),
        components=_components(),
        link_types=_link_types(),
        links=_links(),
        data_items=tuple(DataItem(id=i, name=n) for i, n in DATA_SENT + DATA_RECEIVED),
        data_flows=_data_flows(),
        attackers=(Attacker(id="terrorists", name="Terrorists", capability=4),),
        threats=_threats(),
        controls=controls,
        threat_allocations=allocations,
    )


def build_baseline() -> Model:
    """The assessed design with its four disclosed high-risk scenarios, as published."""
    return _model(
        "Autonomous ship baseline",
        controls=(),
        allocations=(
            _allocation("s1", "social-engineering-malware", "shore-control-centre", 5, 4, 9),
            _allocation("s2", "shore-access", "shore-control-centre", 5, 4, 9),
            _allocation("s10", "physical-attack", "ship-control-station", 5, 4, 9),
            _allocation("s7", MALWARE, "connectivity-manager", 4, 3, 8),
        ),
    )


def build_enhanced() -> Model:
    """The design after the suggested enhancements, rescored as published."""
    kernel = Control(
        id=KERNEL_CONTROL,
        name="Operate in a kernel function",
        allocated_to=("autonomous-ship-controller", "intrusion-detection-system", "navigation-system"),
        mitigates_threats=(MALWARE,),
    )
    accepted = AllocationStatus.ACCEPTED
    return _model(
        "Autonomous ship enhanced",
        controls=(kernel,),
        allocations=(
            _allocation("s1", "social-engineering-malware", "shore-control-centre", 2, 4, 6),
            _allocation("s2", "shore-access", "shore-control-centre", 2, 4, 6),
            _allocation("s10", "physical-attack", "ship-control-station", 1, 4, 5),
            _allocation("s7", MALWARE, "connectivity-manager", 1, 4, 5, status=accepted),
            _allocation(
                "malware-asc", MALWARE, "autonomous-ship-controller", 1, 3, None,
                status=accepted, mitigated_by=(KERNEL_CONTROL,),
            ),
        ),
    )

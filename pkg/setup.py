from setuptools import setup, find_packages

setup(
    name="uvc_voltage_risk",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    include_package_data=True,
    install_requires=[
        "numpy",
        "pandas>=2.2",
        "scipy",
        "networkx",
        "scikit-learn",
        "click",
    ],
    entry_points={
        "console_scripts": [
            "uvc-risk=src.cli.app:main",
        ],
    },
    description="Voltage risk assessment and management for radial distribution feeders "
                "with uncertain PV and load",
    keywords="distribution networks, voltage regulation, gaussian mixture, value at risk",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering",
    ],
)

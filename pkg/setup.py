from setuptools import setup


required_packages = ['numpy', 'scipy']

setup(
    name='lutool',
    version='1.0',
    packages=['lutool', 'lutool.tests'],
    install_requires=required_packages,
    python_requires='>=3.7',
    test_suite='lutool.tests',
    entry_points={
        'console_scripts':
            ['lutool = lutool.__main__:main']
    }
)
